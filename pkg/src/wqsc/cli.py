"""Command-line driver: run protocols, verify golden values, sweep the attack.

Every flag is mirrored by an environment variable with the ``WQSC_`` prefix
(``--announce-rate`` by ``WQSC_ANNOUNCE_RATE`` and so on); flags win over the
environment.  All randomness flows from ``--seed``, which is required, so a
repeated invocation with identical flags produces byte-identical output.

Exit codes: 0 success / channel secure, 1 usage error, 2 verification
failure / channel compromised, 3 inconclusive security check.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from .adversary import UnitaryCouplingAttack
from .bell import QKD_AXIS_SETS, averaged_security_probability
from .golden import run_verification
from .protocol import (
    DEFAULT_ANNOUNCE_RATE,
    DEFAULT_EPSILON,
    Outcome,
    ProtocolConfig,
    ProtocolMode,
    SecurityVerdict,
    binomial_sigma,
    run_protocol,
)
from .qcore import Party, measure_qubit
from .reporting import SweepRow, render_report, render_sweep_csv
from .states import attacked_w_state

ENV_PREFIX = "WQSC_"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPROMISED = 2
EXIT_INCONCLUSIVE = 3

_VERDICT_EXIT = {
    SecurityVerdict.SECURE: EXIT_OK,
    SecurityVerdict.COMPROMISED: EXIT_COMPROMISED,
    SecurityVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

_PARTIES = (Party.ALICE, Party.BOB, Party.CHARLIE)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; remap to the usage code.
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _add_flag(parser: argparse.ArgumentParser, flag: str, env: str, **kwargs) -> None:
    """Register a flag whose default is mirrored by WQSC_<env>."""
    env_value = _env(env)
    if env_value is not None:
        kwargs["default"] = env_value  # argparse applies type= to string defaults
        kwargs.pop("required", None)
    parser.add_argument(flag, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wqsc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one protocol and write its report")
    _add_flag(run, "--mode", "MODE", required=True, choices=[m.value for m in ProtocolMode],
              help="protocol to run")
    _add_flag(run, "--trials", "TRIALS", required=True, type=int, help="number of trials N")
    _add_flag(run, "--seed", "SEED", required=True, type=int, help="root RNG seed")
    _add_flag(run, "--announce-rate", "ANNOUNCE_RATE", type=float,
              default=DEFAULT_ANNOUNCE_RATE,
              help="per-trial probability of a public outcome announcement")
    _add_flag(run, "--phi", "PHI", type=float, default=None,
              help="attack coupling strength in radians, [0, pi/2]; omit for no attack")
    _add_flag(run, "--target", "TARGET", default="C",
              help="attacked party (A, B, or C); meaningful only with --phi")
    _add_flag(run, "--epsilon", "EPSILON", type=float, default=DEFAULT_EPSILON,
              help="permitted security-event frequency")
    _add_flag(run, "--dealer", "DEALER", default="A", help="secret-sharing dealer")
    _add_flag(run, "--format", "FORMAT", choices=["json", "csv"], default="json",
              help="report format")
    _add_flag(run, "--output", "OUTPUT", default="-", help="report path, '-' for stdout")

    sub.add_parser("verify", help="check every analytic golden value")

    sweep = sub.add_parser("sweep-phi", help="empirical vs analytic detection sweep")
    _add_flag(sweep, "--grid", "GRID", required=True,
              help="comma-separated attack strengths in radians")
    _add_flag(sweep, "--trials", "TRIALS", type=int, default=10000,
              help="announced-equivalent samples per grid point")
    _add_flag(sweep, "--seed", "SEED", required=True, type=int, help="root RNG seed")
    _add_flag(sweep, "--epsilon", "EPSILON", type=float, default=DEFAULT_EPSILON,
              help="permitted security-event frequency")
    _add_flag(sweep, "--output", "OUTPUT", default="-", help="CSV path, '-' for stdout")
    return parser


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _cmd_run(args: argparse.Namespace) -> int:
    attack = None
    if args.phi is not None:
        attack = UnitaryCouplingAttack(args.phi, Party.from_letter(args.target))
    config = ProtocolConfig(
        mode=ProtocolMode(args.mode),
        trials=args.trials,
        seed=args.seed,
        announce_rate=args.announce_rate,
        attack=attack,
        epsilon=args.epsilon,
        dealer=Party.from_letter(args.dealer),
    )
    report = run_protocol(config)
    _write(args.output, render_report(report, args.format))
    return _VERDICT_EXIT[report.security_verdict]


def _cmd_verify() -> int:
    passed, checks = run_verification()
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.item}: value={check.value!r} expected={check.expected!r}")
    print(f"{sum(c.passed for c in checks)}/{len(checks)} golden values verified")
    return EXIT_OK if passed else EXIT_COMPROMISED


def sample_security_frequency(
    phi: float, samples: int, seed: int, point_index: int = 0
) -> float:
    """Empirical security-event frequency over announced-equivalent trials.

    Each sample plays one announced QKD-set trial against the attacked
    channel (target Charlie): a uniformly chosen QKD axis set, then
    measurement draws for Alice, Bob, Charlie on a fresh state.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    source = attacked_w_state(phi)
    rng = np.random.default_rng([seed, point_index])
    events = 0
    for _ in range(samples):
        axes = QKD_AXIS_SETS[rng.integers(3)]
        state = source
        outcomes = {}
        for party in _PARTIES:
            outcome, state, _ = measure_qubit(state, party, axes.axis_of(party), rng.random())
            outcomes[party] = outcome
        decider = axes.decider
        x1, x2 = axes.x_parties  # type: ignore[misc]
        if outcomes[decider] is Outcome.PLUS and outcomes[x1] is not outcomes[x2]:
            events += 1
    return events / samples


def _cmd_sweep(args: argparse.Namespace) -> int:
    entries = [item for item in args.grid.split(",") if item.strip()]
    if not entries:
        raise _UsageError("the phi grid is empty")
    try:
        grid = [float(item) for item in entries]
    except ValueError as exc:
        raise _UsageError(f"bad phi grid: {exc}") from exc
    for phi in grid:
        if not 0.0 <= phi <= math.pi / 2.0:
            raise _UsageError(f"grid value {phi!r} lies outside [0, pi/2]")
    if args.trials < 1:
        raise _UsageError("trials per grid point must be at least 1")
    if not 0.0 < args.epsilon < 1.0:
        raise _UsageError("epsilon must lie in (0, 1)")

    rows = []
    for point_index, phi in enumerate(grid):
        p_bar = averaged_security_probability(phi)
        empirical = sample_security_frequency(phi, args.trials, args.seed, point_index)
        verdict = (
            SecurityVerdict.COMPROMISED if empirical > args.epsilon else SecurityVerdict.SECURE
        )
        rows.append(
            SweepRow(
                phi=phi,
                p_bar=p_bar,
                empirical=empirical,
                sigma=binomial_sigma(p_bar, args.trials),
                verdict=verdict,
            )
        )
    _write(args.output, render_sweep_csv(rows))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify()
        return _cmd_sweep(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
