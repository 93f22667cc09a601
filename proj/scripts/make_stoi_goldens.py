# scripts/make_stoi_goldens.py

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

"""Generates the committed STOI fixture WAVs and their golden scores.

Twenty clean/degraded pairs with a spread of degradation types and
severities, written as 16-bit PCM (so the C++ reader sees bit-identical
samples), scored with the reference implementation AFTER quantization.

Usage: python3 scripts/make_stoi_goldens.py
"""

import os

import numpy as np
from scipy.io import wavfile

import reference_stoi

FS = 16000
DUR = 2.0
N = int(FS * DUR)  # 32000, divisible by 8


def voice(rng, f0, am_hz=3.0, n=N, gaps=False):
    """Harmonic stack with slow amplitude modulation; crude vowel-like."""
    t = np.arange(n) / FS
    contour = f0 * (1.0 + 0.08 * np.sin(2 * np.pi * 0.7 * t + rng.uniform(0, 6)))
    phase = 2 * np.pi * np.cumsum(contour) / FS
    x = np.zeros(n)
    for h in range(1, 30):
        if h * f0 > 4000:
            break
        x += np.sin(h * phase + rng.uniform(0, 6)) / h
    env = 0.55 + 0.45 * np.sin(2 * np.pi * am_hz * t + rng.uniform(0, 6))
    x *= env
    if gaps:
        for start in (0.0, 0.9, 1.7):
            a, b = int(start * FS), min(int((start + 0.18) * FS), n)
            x[a:b] = 0.0
    return x / (np.max(np.abs(x)) + 1e-12)


def white(rng, n=N):
    return rng.standard_normal(n)


def pink(rng, n=N):
    spec = np.fft.rfft(rng.standard_normal(n))
    f = np.arange(len(spec), dtype=float)
    f[0] = 1.0
    out = np.fft.irfft(spec / np.sqrt(f), n=n)
    return out / (np.std(out) + 1e-12)


def hum(rng, n=N):
    t = np.arange(n) / FS
    x = np.zeros(n)
    for h, a in ((1, 1.0), (2, 0.6), (3, 0.35), (5, 0.2)):
        x += a * np.sin(2 * np.pi * 50.0 * h * t + rng.uniform(0, 6))
    return x


def babble(rng, n=N):
    x = np.zeros(n)
    for _ in range(6):
        x += voice(rng, rng.uniform(90, 230), am_hz=rng.uniform(2, 6), n=n)
    return x


def am_noise(rng, n=N):
    t = np.arange(n) / FS
    return rng.standard_normal(n) * (0.5 + 0.5 * np.sin(2 * np.pi * 4.0 * t))


def mix(clean, noise, snr_db):
    """Full-utterance mean-square power convention, exact SNR."""
    pc = np.mean(clean ** 2)
    pn = np.mean(noise ** 2)
    scale = np.sqrt(pc / (pn * 10 ** (snr_db / 10)))
    return clean + scale * noise


def lowpass(x, cutoff_hz):
    spec = np.fft.rfft(x)
    f = np.arange(len(spec)) * FS / len(x)
    spec[f > cutoff_hz] = 0.0
    return np.fft.irfft(spec, n=len(x))


def quantize(x):
    """Peak-safe int16 round trip matching the C++ reader (value/32768)."""
    peak = np.max(np.abs(x))
    if peak > 0.99:
        x = x * (0.99 / peak)
    ints = np.clip(np.round(x * 32768.0), -32768, 32767).astype(np.int16)
    return ints


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    fix_dir = os.path.join(here, "..", "tests", "data", "stoi_fixtures")
    os.makedirs(fix_dir, exist_ok=True)

    rng = np.random.default_rng(20260816)
    cases = []

    v1 = voice(rng, 120)
    cases += [("fix01", v1, mix(v1, white(rng), 10.0)),
              ("fix02", v1, mix(v1, white(rng), 0.0)),
              ("fix03", v1, mix(v1, white(rng), -10.0))]
    v2 = voice(rng, 180)
    cases += [("fix04", v2, mix(v2, pink(rng), 5.0)),
              ("fix05", v2, mix(v2, pink(rng), -5.0))]
    v3 = voice(rng, 95)
    cases += [("fix06", v3, mix(v3, hum(rng), 0.0)),
              ("fix07", v3, mix(v3, hum(rng), -10.0))]
    v4 = voice(rng, 150)
    cases += [("fix08", v4, mix(v4, babble(rng), 5.0)),
              ("fix09", v4, mix(v4, babble(rng), -5.0)),
              ("fix10", v4, mix(v4, babble(rng), -15.0))]
    v5 = voice(rng, 200, am_hz=7.0)
    cases += [("fix11", v5, mix(v5, white(rng), 20.0)),
              ("fix12", v5, mix(v5, white(rng), -20.0))]
    v6 = voice(rng, 110)
    cases += [("fix13", v6, lowpass(v6, 1000.0)),
              ("fix14", v6, np.clip(v6 * 4.0, -1.0, 1.0) / 4.0)]
    v7 = voice(rng, 130)
    cases += [("fix15", v7, mix(v7, white(rng), 30.0))]
    v8 = lowpass(white(rng), 3000.0) * (0.4 + 0.6 * np.abs(voice(rng, 100)))
    v8 = v8 / np.max(np.abs(v8))
    cases += [("fix16", v8, mix(v8, white(rng), 0.0))]
    v9 = voice(rng, 160, gaps=True)
    cases += [("fix17", v9, mix(v9, white(rng), 0.0)),
              ("fix18", v9, mix(v9, hum(rng), -5.0))]
    v10 = voice(rng, 140)
    cases += [("fix19", v10, mix(v10, pink(rng), -15.0)),
              ("fix20", v10, mix(v10, am_noise(rng), 0.0))]

    rows = []
    for fid, clean, deg in cases:
        qc = quantize(clean)
        qd = quantize(deg)
        wavfile.write(os.path.join(fix_dir, fid + "_clean.wav"), FS, qc)
        wavfile.write(os.path.join(fix_dir, fid + "_deg.wav"), FS, qd)
        score = reference_stoi.stoi(qc / 32768.0, qd / 32768.0, FS)
        rows.append((fid, score))
        print(f"{fid}: {score:.6f}")

    golden = os.path.join(here, "..", "tests", "data", "stoi_golden.csv")
    with open(golden, "w") as f:
        f.write("fixture_id,stoi_reference\n")
        for fid, score in rows:
            f.write(f"{fid},{score:.8f}\n")
    print("wrote", golden)


if __name__ == "__main__":
    main()
