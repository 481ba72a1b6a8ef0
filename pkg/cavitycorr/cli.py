# command-line front end
import argparse
import json
import os
import sys
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd
from monty.json import MontyEncoder, MSONable

from . import data
from .correlations import CorrelationRecord
from .coupling import CouplingSchedule, CouplingWindow, Model, Pulse, PulseShape
from .dynamics import EvolutionMethod, trapping_time
from .exceptions import (
    CavityCorrError,
    InvalidConfig,
    InvalidSchedule,
    InvalidWindow,
    MethodNotAvailable,
    UnreachableTarget,
)
from .qstate import norm
from .scenarios import Scenario, ScenarioName, build_scenario, run
from .util import cc_logger, format_float

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2

METHODS = ('closed-form', 'rk4', 'both')
FORMATS = ('csv', 'json')

# setting -> parser, shared by flags and config files
_SETTINGS = {
    'scenario': str,
    'model': str,
    'method': str,
    'dt': float,
    'samples': int,
    'pulse': str,
    'strength': float,
    'ramp': float,
    'ratio': float,
    'excitations': int,
    'output': str,
    'format': str,
    'seed': int,
    'trials': int,
    't1': float,
    'tau1': float,
    't2': float,
    'tau2': float,
}

# only custom schedules are assembled from these
_CUSTOM_ONLY = ('model', 'ratio', 't1', 'tau1', 't2', 'tau2')


class RunConfig(MSONable):
    """Everything a simulate or verify run needs. Built from defaults, then a
    config file, then command-line flags; `validate` names the first bad
    field it finds.

    Attributes:
         scenario (str): one of singlet-djc, wstate-djc, triplet-dd, custom
         model (str): djc or dd, custom scenarios only
         method (str): closed-form, rk4 or both
         dt (float): RK4 step, or None for 1e-3 / max coupling
         samples (int): samples per window
         pulse (str): constant or sine-squared
         strength (float): peak coupling
         ramp (float): ramp fraction of sine-squared pulses
         ratio (float): gamma1 / gamma2 for custom simultaneous runs
         excitations (int): N of the subspace
         output (str): output path, or None for stdout
         format (str): csv or json
         seed (int): seed for the verification populations
         trials (int): random states per subspace in verification
         t1, tau1, t2, tau2 (float): custom window timings
    """

    def __init__(
        self,
        scenario: str = ScenarioName.SINGLET_DJC.value,
        model: Optional[str] = None,
        method: str = EvolutionMethod.CLOSED_FORM.value,
        dt: Optional[float] = None,
        samples: int = data.DEFAULT_SAMPLES,
        pulse: str = PulseShape.CONSTANT.value,
        strength: float = 1.0,
        ramp: float = data.DEFAULT_RAMP,
        ratio: Optional[float] = None,
        excitations: int = 1,
        output: Optional[str] = None,
        format: str = 'csv',
        seed: int = 0,
        trials: int = 10000,
        t1: Optional[float] = None,
        tau1: Optional[float] = None,
        t2: Optional[float] = None,
        tau2: Optional[float] = None,
    ):
        self.scenario = scenario
        self.model = model
        self.method = method
        self.dt = dt
        self.samples = samples
        self.pulse = pulse
        self.strength = strength
        self.ramp = ramp
        self.ratio = ratio
        self.excitations = excitations
        self.output = output
        self.format = format
        self.seed = seed
        self.trials = trials
        self.t1 = t1
        self.tau1 = tau1
        self.t2 = t2
        self.tau2 = tau2

    def validate(self) -> 'RunConfig':
        """Checks every field, returning self

        Raises:
             InvalidConfig naming the offending field
        """
        _one_of('scenario', self.scenario, [s.value for s in ScenarioName])
        _one_of('method', self.method, METHODS)
        _one_of('format', self.format, FORMATS)
        _one_of('pulse', self.pulse, [p.value for p in PulseShape])
        if self.samples < 2:
            raise InvalidConfig('samples', f"need at least 2 per window, got {self.samples}")
        if self.dt is not None and not self.dt > 0:
            raise InvalidConfig('dt', f"step must be > 0, got {self.dt}")
        if not (np.isfinite(self.strength) and self.strength > 0):
            raise InvalidConfig('strength', f"must be > 0, got {self.strength}")
        if self.excitations < 1:
            raise InvalidConfig('excitations', f"need N >= 1, got {self.excitations}")
        if self.trials < 1:
            raise InvalidConfig('trials', f"need at least one trial, got {self.trials}")
        if self.excitations > 1 and self.method != EvolutionMethod.RK4.value:
            raise InvalidConfig('method', f"no closed form for N = {self.excitations}, use rk4")

        if self.scenario != ScenarioName.CUSTOM.value:
            for name in _CUSTOM_ONLY:
                if getattr(self, name) is not None:
                    raise InvalidConfig(name, f"only custom scenarios take '{name}'")
            return self

        if self.model is None:
            raise InvalidConfig('model', "custom scenarios need a model (djc or dd)")
        _one_of('model', self.model, [m.value for m in Model])
        if self.tau1 is None:
            raise InvalidConfig('tau1', "custom scenarios need a window duration")
        if self.model == Model.DJC.value:
            if self.tau2 is None:
                raise InvalidConfig('tau2', "the sequential model needs atom 2's duration")
            if self.ratio is not None:
                raise InvalidConfig('ratio', "a coupling ratio only applies to the dd model")
        else:
            if self.ratio is None:
                raise InvalidConfig('ratio', "the dd model needs a coupling ratio")
            if not self.ratio > 0:
                raise InvalidConfig('ratio', f"must be > 0, got {self.ratio}")
            for name in ('t2', 'tau2'):
                if getattr(self, name) is not None:
                    raise InvalidConfig(name, "both atoms share one window in the dd model")
        return self

    def as_dict(self) -> dict[str, Any]:
        d = {"@module": type(self).__module__, "@class": type(self).__name__}
        d.update({k: getattr(self, k) for k in _SETTINGS})
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        return cls(**{k: d[k] for k in _SETTINGS if k in d})


def _one_of(field: str, value: Any, allowed: Sequence[str]):
    if value not in allowed:
        raise InvalidConfig(field, f"{value!r} is not one of {', '.join(allowed)}")


def _convert(key: str, value: str) -> Any:
    try:
        return _SETTINGS[key](value)
    except ValueError:
        raise InvalidConfig(key, f"cannot parse {value!r} as {_SETTINGS[key].__name__}")


def read_config_file(path: str) -> dict[str, Any]:
    """Reads `key = value` lines; '#' starts a comment, blank lines are
    skipped and keys may use '-' or '_'

    Raises:
         InvalidConfig for unreadable files, malformed lines and unknown keys
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as e:
        raise InvalidConfig('config', f"cannot read {path}: {e.strerror}")

    settings = {}
    for number, line in enumerate(lines, start=1):
        text = line.split('#', 1)[0].strip()
        if not text:
            continue
        if '=' not in text:
            raise InvalidConfig('config', f"{path}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in text.split('=', 1))
        key = key.replace('-', '_')
        if key not in _SETTINGS:
            raise InvalidConfig(key, f"unknown setting at {path}:{number}")
        settings[key] = _convert(key, value)
    cc_logger.debug("Read %d settings from %s", len(settings), path)
    return settings


def custom_schedule(config: RunConfig) -> CouplingSchedule:
    """Assembles the schedule of a custom scenario

    Raises:
         InvalidConfig if the timings are inconsistent
    """
    pulse = Pulse(config.pulse, config.strength, config.ramp)
    t1 = 0.0 if config.t1 is None else config.t1
    window = CouplingWindow(t1, config.tau1, pulse)
    if config.model == Model.DD.value:
        return CouplingSchedule.simultaneous(window, ratio=config.ratio)

    if config.t2 is not None and not np.isclose(config.t2, window.end, rtol=1e-12, atol=1e-12):
        raise InvalidConfig('t2', f"atom 2 must enter as atom 1 leaves, at {window.end}")
    return CouplingSchedule.sequential(window, config.tau2, pulse)


def scenario_from_config(config: RunConfig) -> Scenario:
    """Builds the Scenario a config describes

    Raises:
         InvalidConfig, InvalidWindow, InvalidSchedule, UnreachableTarget
    """
    schedule = None
    if config.scenario == ScenarioName.CUSTOM.value:
        schedule = custom_schedule(config)
        if schedule.model == Model.DD:
            try:
                cc_logger.info("Collective angle reaches pi at t = %.12f", trapping_time(schedule))
            except UnreachableTarget:
                cc_logger.info("Collective angle stays below pi over the window")
    return build_scenario(
        config.scenario,
        shape=config.pulse,
        strength=config.strength,
        ramp=config.ramp,
        samples=config.samples,
        schedule=schedule,
        excitations=config.excitations,
    )


def _amplitude_columns(N: int) -> list[str]:
    labels = ['a1', 'a2', 'a3'] if N == 1 else ['b0', 'b1', 'b2', 'b3']
    return [f'{label}_{part}' for label in labels for part in ('re', 'im')]


def records_frame(records: list[CorrelationRecord]) -> pd.DataFrame:
    """One row per record: t, amplitude re/im pairs, then every measure"""
    if not records:
        return pd.DataFrame()
    columns = ['t'] + _amplitude_columns(records[0].state.N) + list(CorrelationRecord.FIELDS)
    rows = []
    for rec in records:
        amps = rec.state.amplitudes
        pairs = np.column_stack([amps.real, amps.imag]).ravel()
        rows.append([rec.t] + list(pairs) + [getattr(rec, k) for k in CorrelationRecord.FIELDS])
    return pd.DataFrame(rows, columns=columns, dtype=float)


def comparison_columns(
    exact: list[CorrelationRecord], integrated: list[CorrelationRecord]
) -> pd.DataFrame:
    """Per-sample amplitude discrepancy and RK4 norm drift"""
    rows = [
        [
            float(np.max(np.abs(a.state.amplitudes - b.state.amplitudes))),
            abs(norm(b.state) - 1.0),
        ]
        for a, b in zip(exact, integrated)
    ]
    return pd.DataFrame(rows, columns=['amplitude_discrepancy', 'norm_drift'], dtype=float)


def simulate_frame(config: RunConfig, scenario: Scenario) -> pd.DataFrame:
    if config.method != 'both':
        return records_frame(run(scenario, config.method, dt=config.dt))
    exact = run(scenario, EvolutionMethod.CLOSED_FORM)
    integrated = run(scenario, EvolutionMethod.RK4, dt=config.dt)
    frame = pd.concat([records_frame(exact), comparison_columns(exact, integrated)], axis=1)
    cc_logger.info(
        "Largest amplitude discrepancy %.3e, largest norm drift %.3e",
        frame['amplitude_discrepancy'].max(),
        frame['norm_drift'].max(),
    )
    return frame


def render(frame: pd.DataFrame, config: RunConfig, scenario: Scenario) -> str:
    """CSV with round-trip float formatting, or JSON carrying the config and scenario"""
    if config.format == 'csv':
        text = frame.copy()
        for column in text.columns:
            text[column] = text[column].map(format_float)
        return text.to_csv(index=False, lineterminator='\n')
    # undefined measures (NaN) are written as null
    records = [
        {k: None if pd.isna(v) else v for k, v in row.items()}
        for row in frame.to_dict(orient='records')
    ]
    payload = {
        'config': config,
        'scenario': scenario,
        'records': records,
    }
    return json.dumps(payload, cls=MontyEncoder, sort_keys=True) + '\n'


def cmd_simulate(config: RunConfig) -> int:
    """Runs one scenario and writes its correlation time series

    Returns:
         0 on success, 1 for configuration errors, 2 if the run fails
    """
    try:
        config.validate()
        scenario = scenario_from_config(config)
    except (InvalidConfig, InvalidWindow, InvalidSchedule, UnreachableTarget) as e:
        cc_logger.error("Configuration error: %s", e.msg)
        return EXIT_CONFIG

    try:
        text = render(simulate_frame(config, scenario), config, scenario)
        if config.output is None:
            sys.stdout.write(text)
        else:
            with open(config.output, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            cc_logger.info("Wrote %s output to %s", config.format, config.output)
    except MethodNotAvailable as e:
        cc_logger.error("Configuration error: %s", e.msg)
        _remove_partial(config.output)
        return EXIT_CONFIG
    except CavityCorrError as e:
        cc_logger.error("Run failed: %s", e.msg)
        _remove_partial(config.output)
        return EXIT_VIOLATION
    return EXIT_OK


def _remove_partial(path: Optional[str]):
    if path is not None and os.path.exists(path):
        os.remove(path)
        cc_logger.info("Removed partial output %s", path)


def format_report(report) -> str:
    lines = []
    for inv in report.children:
        verdict = 'PASS' if inv.get_data('passed') else 'FAIL'
        lines.append(
            f"{inv.name:<40s} {inv.get_data('max_violation'):.3e}"
            f" <= {inv.get_data('tolerance'):.1e}  {verdict}"
        )
    return '\n'.join(lines) + '\n'


def cmd_verify(
    seed: int = 0, trials: int = 10000, tolerances: Optional[dict[str, float]] = None
) -> int:
    """Runs every invariant suite and prints the largest violation of each

    Returns:
         0 if every invariant holds, 1 for bad arguments, 2 on a violation
    """
    from .testing import raise_on_failure, run_suites

    try:
        report = run_suites(seed=seed, trials=trials, tolerances=tolerances)
    except InvalidConfig as e:
        cc_logger.error("Configuration error: %s", e.msg)
        return EXIT_CONFIG

    sys.stdout.write(format_report(report))
    try:
        raise_on_failure(report)
    except CavityCorrError as e:
        cc_logger.error("%s", e.msg)
        return EXIT_VIOLATION
    return EXIT_OK


class _ArgumentParser(argparse.ArgumentParser):
    """Raises InvalidConfig instead of exiting on bad arguments"""

    def error(self, message: str):
        raise InvalidConfig('arguments', message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='cavitycorr',
        description="Entanglement dynamics of two atoms crossing a cavity",
    )
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    sim = sub.add_parser('simulate', help="write the correlation time series of a scenario")
    sim.add_argument('--config', help="key = value settings file, overridden by flags")
    sim.add_argument('--scenario', help="singlet-djc, wstate-djc, triplet-dd or custom")
    sim.add_argument('--model', help="djc or dd, for custom scenarios")
    sim.add_argument('--method', help="closed-form, rk4 or both")
    sim.add_argument('--dt', help="RK4 step (default 1e-3 / max coupling)")
    sim.add_argument('--samples', help="samples per coupling window")
    sim.add_argument('--pulse', help="constant or sine-squared")
    sim.add_argument('--strength', help="peak coupling strength")
    sim.add_argument('--ramp', help="ramp fraction of sine-squared pulses")
    sim.add_argument('--ratio', help="gamma1 / gamma2 for custom dd scenarios")
    sim.add_argument('--excitations', help="excitation number N")
    sim.add_argument('--t1', help="atom 1 injection time")
    sim.add_argument('--tau1', help="atom 1 interaction time")
    sim.add_argument('--t2', help="atom 2 injection time (djc: must equal t1 + tau1)")
    sim.add_argument('--tau2', help="atom 2 interaction time")
    sim.add_argument('--output', help="output file (default stdout)")
    sim.add_argument('--format', help="csv or json")

    ver = sub.add_parser('verify', help="run the invariant suites")
    ver.add_argument('--config', help="key = value settings file, overridden by flags")
    ver.add_argument('--seed', help="seed for the random populations")
    ver.add_argument('--trials', help="random states per subspace")
    ver.add_argument(
        '--tolerance',
        action='append',
        default=[],
        metavar='NAME=VALUE',
        help="override an invariant's tolerance",
    )
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merges defaults, the config file and explicit flags, in that order"""
    settings = {}
    if getattr(args, 'config', None):
        settings.update(read_config_file(args.config))
    for key in _SETTINGS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = _convert(key, value)
    return RunConfig(**settings)


def _tolerance_overrides(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition('=')
        if not sep:
            raise InvalidConfig('tolerance', f"expected NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise InvalidConfig('tolerance', f"cannot parse {value!r} as float")
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args)
        if args.command == 'verify':
            config.validate()
            tolerances = _tolerance_overrides(args.tolerance)
    except InvalidConfig as e:
        cc_logger.error("Configuration error: %s", e.msg)
        return EXIT_CONFIG

    if args.command == 'verify':
        return cmd_verify(config.seed, config.trials, tolerances)
    return cmd_simulate(config)


if __name__ == '__main__':
    sys.exit(main())
