"""polarforge command line: design, analyze and simulate polar codes."""

import json
import sys

import click
import numpy as np

from .polar_core import RateProfile, expand_minimal_set
from . import pretransform as pt
from .weight_enum import min_weight_enumeration
from . import code_design as cd
from .decoder import DecoderConfig, PolarCode, scl_decode, fsscl_decode
from . import sim as simmod


def load_code_spec(spec):
    """Build a PolarCode from a code-spec dict.

    Schema: {"n": int,
             "info": {"minimal": [...]} | {"explicit": [...]} | {"nr": {"k": int}},
             "pretransform": {"kind": ...}}
    The crc kind treats the info set as the (K+q)-bit base profile.
    """
    n = int(spec["n"])
    info = spec["info"]
    if "minimal" in info:
        info_set = expand_minimal_set(info["minimal"], n)
    elif "explicit" in info:
        info_set = sorted(int(i) for i in info["explicit"])
    elif "nr" in info:
        info_set = cd.nr_profile(1 << n, int(info["nr"]["k"])).info_set
    else:
        raise ValueError("info must give 'minimal', 'explicit' or 'nr'")
    profile = RateProfile(n, info_set)
    stanza = spec.get("pretransform", {"kind": "identity"})
    kind = stanza.get("kind", "identity")
    if kind == "identity":
        T = pt.identity_matrix(profile)
    elif kind == "row_merge":
        T = pt.row_merge_matrix(profile, [tuple(p) for p in stanza["pairs"]])
    elif kind == "crc":
        poly = stanza["poly"]
        poly = int(poly, 16) if isinstance(poly, str) else int(poly)
        profile, T = pt.crc_matrix(profile, poly, int(stanza["q"]))
    elif kind == "conv":
        coeffs = pt.conv_coeffs_from_octal(stanza["poly_octal"])
        T = pt.conv_matrix(profile, coeffs)
    elif kind == "generic":
        T = pt.generic_matrix(profile, stanza["rows"])
    else:
        raise ValueError("unknown pretransform kind %r" % kind)
    resolved = {
        "n": n,
        "info": {"explicit": profile.info_set},
        "pretransform": stanza,
    }
    return PolarCode(profile, T), resolved


def _read_spec(path):
    with open(path) as fh:
        return json.load(fh)


@click.group()
def main():
    """Polar code design, weight enumeration and simulation."""


@main.command()
@click.option("--n", "block_len", type=int, required=True,
              help="block length N (power of two)")
@click.option("--k", type=int, required=True)
@click.option("--snr-db", type=float, required=True, help="design Es/N0 in dB")
@click.option("--mode", type=click.Choice(["full", "simplified"]), default="full")
@click.option("--dmin-target", type=int, default=None)
@click.option("--emit", type=click.Path(), default=None, help="write code-spec JSON")
def design(block_len, k, snr_db, mode, dmin_target, emit):
    """Design a rate profile by density evolution and pick row merges."""
    n = int(block_len).bit_length() - 1
    if 1 << n != block_len:
        raise click.BadParameter("N must be a power of two")
    if dmin_target:
        ranking = cd.ga_density_evolution(n, snr_db)
        res = cd.design_nondecreasing(ranking, 1 << n, k, dmin_target)
        profile, pairs = res.profile, res.merges
        click.echo("kappa=%d w_min=%d A=%d" % (res.kappa, res.w_min, res.a_wmin))
    else:
        profile = cd.design_rate_profile(1 << n, k, snr_db)
        pairs = cd.merge_rows(profile, mode=mode)
    T = pt.row_merge_matrix(profile, pairs)
    w, a, _ = min_weight_enumeration(profile, T)
    click.echo("N=%d K=%d w_min=%d A_wmin=%d merges=%d"
               % (profile.N, profile.K, w, a, len(pairs)))
    if emit:
        spec = {"n": n, "info": {"explicit": profile.info_set},
                "pretransform": {"kind": "row_merge",
                                 "pairs": [list(p) for p in pairs]}}
        with open(emit, "w") as fh:
            json.dump(spec, fh, indent=2)
        click.echo("wrote %s" % emit)


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
@click.option("--mode", type=click.Choice(["full", "simplified"]), default="full")
@click.option("--emit", type=click.Path(), default=None)
def merge(spec_path, mode, emit):
    """Select row merges for the profile of an existing code spec."""
    code, resolved = load_code_spec(_read_spec(spec_path))
    pairs = cd.merge_rows(code.profile, mode=mode)
    T = pt.row_merge_matrix(code.profile, pairs)
    w, a, _ = min_weight_enumeration(code.profile, T)
    click.echo("w_min=%d A_wmin=%d pairs=%s" % (w, a, sorted(pairs)))
    if emit:
        resolved["pretransform"] = {"kind": "row_merge",
                                    "pairs": [list(p) for p in sorted(pairs)]}
        with open(emit, "w") as fh:
            json.dump(resolved, fh, indent=2)


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
def enumerate(spec_path):
    """Count minimum-weight codewords of the spec'd code."""
    code, _ = load_code_spec(_read_spec(spec_path))
    w, a, per = min_weight_enumeration(code.profile, code.T)
    click.echo(json.dumps({"w_min": int(w), "A_wmin": int(a),
                           "per_coset": {str(i): int(v) for i, v in per.items()}}))


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
@click.option("--plan", "plan_path", type=click.Path(exists=True), required=True)
@click.option("--seed", type=int, default=None, help="override plan seed")
@click.option("--workers", type=int, default=None, help="override plan workers")
@click.option("--out", type=click.Path(), default=".")
def simulate(spec_path, plan_path, seed, workers, out):
    """Run the simulate/enumerate/bound stages of a plan file."""
    if seed is not None or workers is not None:
        with open(plan_path) as fh:
            plan = json.load(fh)
        sim_cfg = plan.setdefault("simulate", {})
        if seed is not None:
            sim_cfg["seed"] = seed
        if workers is not None:
            sim_cfg["workers"] = workers
        import tempfile, os

        fd, tmp = tempfile.mkstemp(suffix=".json")
        with os.fdopen(fd, "w") as fh:
            json.dump(plan, fh)
        plan_path = tmp
    manifest = simmod.run_experiment(spec_path, plan_path, out_dir=out)
    click.echo(json.dumps(manifest["outputs"], indent=2, sort_keys=True))


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
@click.option("--ebn0-db", type=float, multiple=True, required=True)
@click.option("--a", "terms", type=(int, int), multiple=True,
              help="spectrum term: weight count")
def bound(spec_path, ebn0_db, terms):
    """Truncated union bound from given spectrum terms (or A_wmin)."""
    code, _ = load_code_spec(_read_spec(spec_path))
    spectrum = list(terms)
    if not spectrum:
        w, a, _ = min_weight_enumeration(code.profile, code.T)
        spectrum = [(w, a)]
    vals = simmod.union_bound(spectrum, code.K / code.N, np.array(ebn0_db))
    for e, v in zip(ebn0_db, np.atleast_1d(vals)):
        click.echo("%.6g,%.8e" % (e, v))


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
@click.option("--llr-file", type=click.Path(exists=True), required=True,
              help="text file with N channel LLRs")
@click.option("--list-size", "-l", type=int, default=8)
@click.option("--variant", type=click.Choice(["minsum", "boxplus"]), default="minsum")
@click.option("--slow", is_flag=True, help="leaf-by-leaf list decoding")
def decode(spec_path, llr_file, list_size, variant, slow):
    """Decode one frame of LLRs and print the ranked candidate list."""
    code, _ = load_code_spec(_read_spec(spec_path))
    llr = np.loadtxt(llr_file).reshape(1, -1)
    fn = scl_decode if slow else fsscl_decode
    u, pm = fn(llr, code, list_size, variant)
    for l in range(u.shape[1]):
        if not np.isfinite(pm[0, l]):
            continue
        m = code.message_from_u(u[0, l])
        click.echo("pm=%.6f message=%s u=%s"
                   % (pm[0, l], "".join(map(str, m)), "".join(map(str, u[0, l]))))


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True), required=True)
def info(spec_path):
    """Summarize a code spec: parameters, frozen structure, complexity."""
    code, resolved = load_code_spec(_read_spec(spec_path))
    nd, nxor = pt.complexity_metrics(code.T, code.profile)
    w, exact = cd.theoretical_dmin(code.profile, code.T)
    click.echo(json.dumps({
        "N": code.N, "K": code.K, "kind": code.T.kind,
        "decreasing": code.profile.is_decreasing(),
        "w_min": int(w), "dmin_exact": bool(exact),
        "dynamic_frozen": int(nd), "n_xor": int(nxor),
    }, indent=2, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
