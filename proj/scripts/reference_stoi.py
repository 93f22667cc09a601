# scripts/reference_stoi.py

# Copyright 2026  AVSQA Authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Reference STOI (Taal et al. 2011), transcribed from the published
algorithm. Used once to stamp golden values for the C++ implementation;
kept in the repository so the goldens can be regenerated and audited.
Requires numpy + scipy only.
"""

import numpy as np
from scipy.signal import resample_poly

FS = 10000          # internal analysis rate
N_FRAME = 256       # analysis frame at 10 kHz
NFFT = 512          # zero-padded DFT length
NUMBAND = 15        # one-third-octave bands
MINFREQ = 150.0     # lowest band center, Hz
N_SEG = 30          # frames per comparison segment (384 ms)
BETA = -15.0        # lower SDR bound, dB
DYN_RANGE = 40.0    # silence-removal dynamic range, dB
EPS = np.finfo(np.float64).eps


def thirdoct(fs, nfft, num_bands, min_freq):
    f = np.linspace(0, fs, nfft + 1)
    f = f[: nfft // 2 + 1]
    k = np.arange(num_bands, dtype=float)
    freq_low = min_freq * np.power(2.0, (2 * k - 1) / 6)
    freq_high = min_freq * np.power(2.0, (2 * k + 1) / 6)
    obm = np.zeros((num_bands, len(f)))
    for i in range(num_bands):
        fl = int(np.argmin(np.square(f - freq_low[i])))
        fh = int(np.argmin(np.square(f - freq_high[i])))
        obm[i, fl:fh] = 1
    return obm


def _hanning(n):
    return np.hanning(n + 2)[1:-1]


def stft_frames(x, win_size, fft_size):
    w = _hanning(win_size)
    hop = win_size // 2
    starts = range(0, len(x) - win_size + 1, hop)
    return np.array([np.fft.rfft(w * x[i:i + win_size], n=fft_size)
                     for i in starts])


def remove_silent_frames(x, y, dyn_range, framelen, hop):
    w = _hanning(framelen)
    starts = range(0, len(x) - framelen + 1, hop)
    x_frames = np.array([w * x[i:i + framelen] for i in starts])
    y_frames = np.array([w * y[i:i + framelen] for i in starts])
    x_energies = 20 * np.log10(np.linalg.norm(x_frames, axis=1) + EPS)
    mask = (np.max(x_energies) - dyn_range - x_energies) < 0
    x_frames = x_frames[mask]
    y_frames = y_frames[mask]
    n_sil = (len(x_frames) - 1) * hop + framelen
    x_sil = np.zeros(n_sil)
    y_sil = np.zeros(n_sil)
    for i in range(len(x_frames)):
        x_sil[i * hop:i * hop + framelen] += x_frames[i]
        y_sil[i * hop:i * hop + framelen] += y_frames[i]
    return x_sil, y_sil


def stoi(x, y, fs_sig):
    if len(x) != len(y):
        raise ValueError("length mismatch")
    x = resample_poly(x, FS, fs_sig)
    y = resample_poly(y, FS, fs_sig)
    x, y = remove_silent_frames(x, y, DYN_RANGE, N_FRAME, N_FRAME // 2)

    x_spec = stft_frames(x, N_FRAME, NFFT).T  # bins x frames
    y_spec = stft_frames(y, N_FRAME, NFFT).T
    obm = thirdoct(FS, NFFT, NUMBAND, MINFREQ)
    x_tob = np.sqrt(obm @ np.square(np.abs(x_spec)))  # bands x frames
    y_tob = np.sqrt(obm @ np.square(np.abs(y_spec)))

    frames = x_tob.shape[1]
    if frames < N_SEG:
        raise ValueError("too short for STOI")
    x_seg = np.array([x_tob[:, m - N_SEG:m] for m in range(N_SEG, frames + 1)])
    y_seg = np.array([y_tob[:, m - N_SEG:m] for m in range(N_SEG, frames + 1)])

    norm_const = (np.linalg.norm(x_seg, axis=2, keepdims=True) /
                  (np.linalg.norm(y_seg, axis=2, keepdims=True) + EPS))
    y_norm = y_seg * norm_const
    clip_value = 10 ** (-BETA / 20)
    y_prim = np.minimum(y_norm, x_seg * (1 + clip_value))

    y_prim = y_prim - np.mean(y_prim, axis=2, keepdims=True)
    x_cent = x_seg - np.mean(x_seg, axis=2, keepdims=True)
    y_prim = y_prim / (np.linalg.norm(y_prim, axis=2, keepdims=True) + EPS)
    x_cent = x_cent / (np.linalg.norm(x_cent, axis=2, keepdims=True) + EPS)

    return float(np.sum(x_cent * y_prim) / (y_prim.shape[0] * y_prim.shape[1]))
