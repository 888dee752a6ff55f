"""Train/evaluate entry point.

`nnsel train` consumes a simulator-exported JSONL dataset, runs both
training phases and writes a checkpoint, a JSON config sidecar and a
`epoch,phase,snr_db,val_se` metrics CSV. `nnsel evaluate` reports mean SE
and the ratio to the greedy-with-swaps reference.
"""

from __future__ import annotations

import argparse
import sys

from .config import NNConfig, TrainConfig, load_sidecar, save_sidecar
from .data import load_jsonl
from .evaluate import evaluate
from .physics import Scenario
from .train import load_checkpoint, save_checkpoint, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nnsel", description="Transformer port selector")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="two-phase training from a JSONL dataset")
    p_train.add_argument("--train-data", required=True)
    p_train.add_argument("--val-data", required=True)
    p_train.add_argument("--active", "--L", dest="L", type=int, required=True)
    p_train.add_argument("--aperture", "--W", dest="W", type=float, required=True)
    p_train.add_argument("--n1", type=int, default=100)
    p_train.add_argument("--n2", type=int, default=100)
    p_train.add_argument("--batch", type=int, default=64)
    p_train.add_argument("--d", type=int, default=192)
    p_train.add_argument("--heads", type=int, default=6)
    p_train.add_argument("--layers", type=int, default=5)
    p_train.add_argument("--d-ff", type=int, default=384)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", required=True, help="checkpoint path (.pt)")
    p_train.add_argument("--metrics", required=True, help="metrics CSV path")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="mean SE vs the reference selector")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--sidecar", required=True)
    p_eval.add_argument("--ports", "--P", dest="P", type=int, required=True)
    p_eval.add_argument("--active", "--L", dest="L", type=int, required=True)
    p_eval.add_argument("--users", "--K", dest="K", type=int, required=True)
    p_eval.add_argument("--aperture", "--W", dest="W", type=float, required=True)
    p_eval.add_argument("--snrs", default="10,15,20")
    p_eval.add_argument("--trials", type=int, default=100)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.set_defaults(func=cmd_eval)

    return parser


def cmd_train(args: argparse.Namespace) -> int:
    train_samples = load_jsonl(args.train_data)
    val_samples = load_jsonl(args.val_data)
    P, n_t = train_samples[0].H.shape
    nn_cfg = NNConfig(
        input_dim=2 * n_t + 3, d=args.d, h=args.heads, n_layers=args.layers, d_ff=args.d_ff
    )
    train_cfg = TrainConfig(n1=args.n1, n2=args.n2, batch_size=args.batch, seed=args.seed)
    scenario = Scenario(P=P, L=args.L, K=n_t, W=args.W, seed=args.seed)
    result = train(train_samples, val_samples, args.L, scenario, nn_cfg, train_cfg)
    save_checkpoint(result.model, args.out)
    save_sidecar(args.out + ".json", nn_cfg, train_cfg)
    result.metrics.write_csv(args.metrics)
    print(f"checkpoint: {args.out}; metrics: {args.metrics}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    nn_cfg, _ = load_sidecar(args.sidecar)
    model = load_checkpoint(nn_cfg, args.checkpoint)
    scenario = Scenario(P=args.P, L=args.L, K=args.K, W=args.W, seed=args.seed)
    snrs = [float(s) for s in args.snrs.split(",") if s.strip()]
    for point in evaluate(model, scenario, snrs, args.trials):
        print(
            f"snr={point.snr_db:g} dB: nn={point.nn_se:.4f} "
            f"ref={point.reference_se:.4f} ratio={point.ratio:.3f} "
            f"top-sinr={point.baseline_se:.4f}"
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
