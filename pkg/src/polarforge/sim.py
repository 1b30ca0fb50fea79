"""AWGN Monte-Carlo harness and union-bound analytics.

Noise is drawn from counter-based Philox streams addressed by (seed, SNR
point, frame index), so a frame's channel realization never depends on
how frames are distributed over workers.  Each frame consumes a fixed
number of 64-bit words (inverse-CDF Gaussians, then message bits), which
keeps the mapping frame -> randomness exact.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.special import erfc, ndtri

from .decoder import DecoderConfig, build_pft, fsscl_decode, select_output

__all__ = [
    "ChannelModel",
    "SimRecord",
    "transmit",
    "union_bound",
    "monte_carlo",
    "run_experiment",
]

_CHUNK = 2048  # frames per work unit; part of the reproducibility contract


class ChannelModel:
    """Binary-input AWGN with BPSK mapping x = 1 - 2c."""

    def __init__(self, ebn0_db, rate):
        self.ebn0_db = float(ebn0_db)
        self.rate = float(rate)
        self.sigma2 = 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))
        self.llr_scale = 2.0 / self.sigma2


class SimRecord:
    def __init__(self, ebn0_db, frames, block_errors, bit_errors, seconds, K):
        self.ebn0_db = ebn0_db
        self.frames = frames
        self.block_errors = block_errors
        self.bit_errors = bit_errors
        self.seconds = seconds
        self.K = K

    @property
    def bler(self):
        return self.block_errors / self.frames if self.frames else 0.0

    @property
    def ber(self):
        return self.bit_errors / (self.frames * self.K) if self.frames else 0.0

    def as_row(self, timing=False):
        return "%.6g,%d,%d,%.8e,%.8e,%.6f" % (
            self.ebn0_db, self.frames, self.block_errors,
            self.bler, self.ber, self.seconds if timing else 0.0)


def transmit(c, channel, rng):
    """Map a codeword (or batch) to channel LLRs through BPSK + AWGN."""
    c = np.asarray(c)
    x = 1.0 - 2.0 * c
    y = x + np.sqrt(channel.sigma2) * rng.standard_normal(c.shape)
    return channel.llr_scale * y


def qfunc(x):
    return 0.5 * erfc(np.asarray(x, dtype=np.float64) / np.sqrt(2.0))


def union_bound(spectrum, rate, ebn0_db):
    """Truncated union bound on the block error rate of ML decoding:
    sum_w A_w Q(sqrt(2 w R Eb/N0)) over the provided spectrum terms."""
    if isinstance(spectrum, dict):
        terms = spectrum.items()
    else:
        terms = spectrum
    es = rate * 10.0 ** (np.asarray(ebn0_db, dtype=np.float64) / 10.0)
    total = 0.0
    for w, a in terms:
        if w > 0 and a > 0:
            total = total + a * qfunc(np.sqrt(2.0 * w * es))
    return total


def _frame_words(N, K):
    # one 64-bit word per Gaussian, then one per message bit
    return -(-(N + K) // 4) * 4


def _chunk_stats(code, tree, config, channel, seed, point_idx, start, count):
    """Decode frames [start, start + count) of one SNR point."""
    N, K = code.N, code.K
    words = _frame_words(N, K)
    bg = np.random.Philox(key=(int(seed) << 64) | (point_idx & 0xFFFFFFFF))
    bg.advance(start * (words // 4))
    raw = bg.random_raw(count * words).reshape(count, words)
    uni = (raw[:, :N] >> np.uint64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54
    noise = ndtri(uni)
    m = (raw[:, N : N + K] & np.uint64(1)).astype(np.uint8)
    c = code.encode(m)
    y = (1.0 - 2.0 * c) + np.sqrt(channel.sigma2) * noise
    llr = channel.llr_scale * y
    u, pm = fsscl_decode(llr, code, config.L, config.variant, config=config, tree=tree)
    mhat = select_output(u, pm, code)
    errs = mhat != m
    block = int(np.any(errs, axis=-1).sum())
    bits = int(errs.sum())
    return block, bits


def monte_carlo(code, decoder_config, snr_points, min_errors=1000,
                max_frames=10**7, seed=0, workers=1):
    """Simulate each Eb/N0 point until min_errors block errors (or the
    frame cap).  The stopping decision is taken at fixed chunk boundaries
    in frame order, so results are identical for any worker count."""
    tree = build_pft(code, decoder_config)
    rate = code.K / code.N
    records = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for p, ebn0 in enumerate(snr_points):
            channel = ChannelModel(ebn0, rate)
            t0 = time.time()
            frames = block = bits = 0
            pending = {}
            next_submit = 0
            next_collect = 0

            def submit(k):
                args = (code, tree, decoder_config, channel, seed, p,
                        k * _CHUNK, _CHUNK)
                if pool is None:
                    pending[k] = args
                else:
                    pending[k] = pool.submit(_chunk_stats, *args)

            inflight = max(1, workers * 2)
            while True:
                while next_submit < next_collect + inflight and \
                        next_submit * _CHUNK < max_frames:
                    submit(next_submit)
                    next_submit += 1
                if next_collect not in pending:
                    break
                job = pending.pop(next_collect)
                b, e = _chunk_stats(*job) if pool is None else job.result()
                next_collect += 1
                frames += _CHUNK
                block += b
                bits += e
                if block >= min_errors or frames >= max_frames:
                    break
            for job in pending.values():
                if pool is not None:
                    job.cancel()
            pending.clear()
            records.append(SimRecord(ebn0, frames, block, bits,
                                     time.time() - t0, code.K))
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    return records


def write_csv(records, path, timing=False):
    with open(path, "w") as fh:
        fh.write("ebn0_db,frames,block_errors,bler,ber,seconds\n")
        for r in records:
            fh.write(r.as_row(timing=timing) + "\n")


def _version():
    import subprocess

    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)))
        if out.returncode == 0:
            return out.stdout.strip()
    except Exception:
        pass
    return "artifact-0.1.0"


def run_experiment(spec_file, plan_file, out_dir="."):
    """Execute the stages of a plan file against a code spec; writes one
    CSV per simulate stage and a manifest with the resolved configs."""
    from .cli import load_code_spec  # late import; CLI owns the schema

    with open(spec_file) as fh:
        spec = json.load(fh)
    with open(plan_file) as fh:
        plan = json.load(fh)
    code, spec_resolved = load_code_spec(spec)
    os.makedirs(out_dir, exist_ok=True)
    manifest = {
        "version": _version(),
        "spec": spec_resolved,
        "plan": plan,
        "outputs": {},
    }
    for stage in plan.get("stages", []):
        if stage == "enumerate":
            from .weight_enum import min_weight_enumeration

            w, a, per = min_weight_enumeration(code.profile, code.T)
            manifest["outputs"]["enumerate"] = {
                "w_min": int(w), "A_wmin": int(a),
                "per_coset": {str(i): int(v) for i, v in per.items()},
            }
        elif stage == "bound":
            cfg = plan.get("bound", {})
            bl = union_bound(
                [(int(w), int(a)) for w, a in cfg["spectrum"]],
                code.K / code.N, np.asarray(cfg["ebn0_db"]))
            manifest["outputs"]["bound"] = {
                "ebn0_db": cfg["ebn0_db"],
                "bler_bound": np.atleast_1d(bl).tolist(),
            }
        elif stage == "simulate":
            cfg = plan.get("simulate", {})
            dec = DecoderConfig(**cfg.get("decoder", {}))
            recs = monte_carlo(
                code, dec, cfg["ebn0_db"],
                min_errors=cfg.get("min_errors", 1000),
                max_frames=cfg.get("max_frames", 10**7),
                seed=cfg.get("seed", 0),
                workers=cfg.get("workers", 1))
            csv_path = os.path.join(out_dir, cfg.get("csv", "bler.csv"))
            write_csv(recs, csv_path, timing=cfg.get("timing", False))
            manifest["outputs"]["simulate"] = {
                "csv": csv_path,
                "decoder": dec.snapshot(),
                "seconds": [r.seconds for r in recs],
            }
        else:
            raise ValueError("unknown stage %r" % stage)
    mpath = os.path.join(out_dir, "manifest.json")
    with open(mpath, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return manifest
