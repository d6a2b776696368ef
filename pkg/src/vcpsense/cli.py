"""Command line interface.

Subcommands:
  simulate  one seeded run of a config; dumps the RDM matrices as CSV
  sweep     scripted preset runner (CSV + manifest per preset)
  validate  statistical suites for the sub-block model and RDM laws
  cfar      CA-CFAR detection on a previously dumped RDM
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import a_critical
from .channel import NoiseSpec, draw_targets, generate_echo
from .config import ConfigError, load_config
from .detector import CfarParams, cfar_detect
from .pipeline import cos_rdms, vcp_rdms
from .presets import PRESET_NAMES, run_preset
from .rng import stream
from .sensing_cos import Rdm
from .waveform import add_cp, add_rcp, draw_data, ft_to_time, map_dd_to_ft


def _dump_rdm(rdm: Rdm, path: Path) -> None:
    header = (f"kind={rdm.kind} origin={rdm.origin} "
              f"delay_step={rdm.delay_step!r} doppler_step={rdm.doppler_step!r} "
              f"shape={rdm.values.shape[0]}x{rdm.values.shape[1]}")
    with open(path, "w") as fh:
        fh.write(f"# {header}\n")
        for row in rdm.values:
            fh.write(",".join(f"{v.real:.17e}{v.imag:+.17e}j" for v in row))
            fh.write("\n")


def _load_rdm(path: Path) -> Rdm:
    delay_step = doppler_step = None
    kind, origin = "unknown", "unknown"
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("#"):
        for tok in first[1:].split():
            if "=" in tok:
                key, val = tok.split("=", 1)
                if key == "delay_step":
                    delay_step = None if val == "None" else float(val)
                elif key == "doppler_step":
                    doppler_step = None if val == "None" else float(val)
                elif key == "kind":
                    kind = val
                elif key == "origin":
                    origin = val
    vals = np.loadtxt(path, dtype=complex, delimiter=",")
    return Rdm(np.atleast_2d(vals), kind=kind, origin=origin,
               delay_step=delay_step, doppler_step=doppler_step)


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    p = cfg.system
    trial = 0
    grid = draw_data(p, stream(cfg.seed, "data", trial))
    S_ft = map_dd_to_ft(grid, p)
    cols = ft_to_time(S_ft, p)
    tx = add_rcp(cols, p) if p.waveform == "rcp-otfs" else add_cp(cols, p)
    targets = draw_targets(cfg.scenario, p, stream(cfg.seed, "targets", trial))
    sigma_w2 = cfg.sigma_w2
    if sigma_w2 is None:
        sigma_w2 = p.sigma_d2 / 10 ** (cfg.gamma0_db[0] / 10)
    rx = generate_echo(tx, targets, NoiseSpec(sigma_w2), p,
                       stream(cfg.seed, "noise", trial))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.segmentation == "follow-comm":
        rr, rc = cos_rdms(rx, S_ft, p)
    else:
        rr, rc = vcp_rdms(rx, tx, cfg.segmentation, p,
                          a=a_critical(p.sigma_d2, p.total_samples))
    _dump_rdm(rr, out / "rdm_ratio.csv")
    _dump_rdm(rc, out / "rdm_ccc.csv")
    truth = [{"range_m": t.range_m, "velocity_mps": t.velocity_mps,
              "power": t.sigma_p2} for t in targets]
    (out / "truth.json").write_text(json.dumps(truth, indent=2) + "\n")
    print(f"wrote rdm_ratio.csv, rdm_ccc.csv, truth.json to {out}")
    return 0


def _cmd_sweep(args) -> int:
    overrides = {}
    if args.config:
        with open(args.config) as fh:
            overrides.update(json.load(fh))
    if args.scale is not None:
        overrides["scale"] = args.scale
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    table, manifest = run_preset(args.preset, overrides, out_dir=args.out,
                                 workers=args.workers)
    print(f"{args.preset}: {len(table.rows)} rows -> {args.out}")
    return 0


def _cmd_validate(args) -> int:
    overrides = {}
    if args.scale is not None:
        overrides["scale"] = args.scale
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    suites = {"lemmas": ["lemma_validation"],
              "propositions": ["proposition_validation"],
              "all": ["lemma_validation", "proposition_validation"]}[args.suite]
    ok = True
    for name in suites:
        table, manifest = run_preset(name, dict(overrides), out_dir=args.out,
                                     workers=args.workers)
        status = "PASS" if manifest["passed"] else "FAIL"
        print(f"{name}: {status}")
        for row in table.rows:
            if not row.metric.endswith("_theory"):
                theory = next(r.mean for r in table.rows
                              if r.metric == row.metric + "_theory"
                              and r.sweep_value == row.sweep_value)
                print(f"  {row.metric}: empirical={row.mean:.6g} theory={theory:.6g}")
        ok = ok and manifest["passed"]
    return 0 if ok else 2


def _cmd_cfar(args) -> int:
    rdm = _load_rdm(Path(args.rdm))
    params = CfarParams(pf=args.pf, ng_k=args.ng_k, ng_l=args.ng_l,
                        nr_k=args.nr_k, nr_l=args.nr_l)
    dets = cfar_detect(rdm, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "detections.csv"
    with open(path, "w") as fh:
        fh.write("k,l,power,threshold,tau_hat_s,nu_hat_hz\n")
        for d in dets:
            fh.write(f"{d.k_star},{d.l_star},{d.power!r},{d.threshold!r},"
                     f"{'' if d.tau_hat is None else repr(d.tau_hat)},"
                     f"{'' if d.nu_hat is None else repr(d.nu_hat)}\n")
    print(f"{len(dets)} detections -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vcpsense",
        description="Sub-block/VCP sensing simulator and validation harness")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one config and dump its RDMs")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)
    sim.set_defaults(fn=_cmd_simulate)

    sw = sub.add_parser("sweep", help="run an experiment preset")
    sw.add_argument("--preset", required=True, choices=PRESET_NAMES)
    sw.add_argument("--config", help="JSON file with preset overrides")
    sw.add_argument("--scale", type=float, default=None,
                    help="shrink N and trials by this factor (1.0 = full scale)")
    sw.add_argument("--trials", type=int, default=None)
    sw.add_argument("--seed", type=int, default=None)
    sw.add_argument("--out", required=True)
    sw.add_argument("--workers", type=int, default=1)
    sw.set_defaults(fn=_cmd_sweep)

    va = sub.add_parser("validate", help="statistical validation suites")
    va.add_argument("--suite", choices=["lemmas", "propositions", "all"],
                    default="all")
    va.add_argument("--scale", type=float, default=None)
    va.add_argument("--trials", type=int, default=None)
    va.add_argument("--seed", type=int, default=None)
    va.add_argument("--out", default="validation_out")
    va.add_argument("--workers", type=int, default=1)
    va.set_defaults(fn=_cmd_validate)

    cf = sub.add_parser("cfar", help="CA-CFAR detection on a dumped RDM")
    cf.add_argument("--rdm", required=True, help="RDM CSV from `simulate`")
    cf.add_argument("--pf", type=float, required=True)
    cf.add_argument("--ng-k", type=int, default=3)
    cf.add_argument("--ng-l", type=int, default=3)
    cf.add_argument("--nr-k", type=int, default=2)
    cf.add_argument("--nr-l", type=int, default=5)
    cf.add_argument("--out", required=True)
    cf.set_defaults(fn=_cmd_cfar)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
