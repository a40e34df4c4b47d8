"""The `pmsmadp` command-line application."""

import functools
import json
import logging
import os
import sys
import traceback

from plumbum import cli

import pmsmadp
from pmsmadp.adp.config import TrainingConfig
from pmsmadp.adp.cost import CostSpec
from pmsmadp.adp.trainer import ValueIteration
from pmsmadp.common.document import Document, check_empty
from pmsmadp.common.log import Loglevel, configure_logging, ROOT_LOGGER
from pmsmadp.host.scenario import Scenario
from pmsmadp.host.simulator import run_scenario
from pmsmadp.host.suite import ReferenceSuite, trace_metrics, to_jsonable
from pmsmadp.host.trace import SimTrace
from pmsmadp.motor.params import MotorParams

__all__ = ['PmsmAdp', 'main']

def _tee(value):
    """Parses a `<file>:<loglevel>` tee specification."""
    filename, sep, level = value.rpartition(':')
    if not sep or not filename:
        raise ValueError("tee must be given as <file>:<loglevel>")
    return filename, Loglevel.parse(level)

def _guarded(fn):
    """Runs a subcommand body, turning exceptions into an error log and
    exit status 1."""
    @functools.wraps(fn)
    def wrapper(self, *args):
        try:
            return fn(self, *args)
        except Exception as e:
            log = logging.getLogger(ROOT_LOGGER + '.cli')
            log.error('%s: %s', type(e).__name__, e)
            log.log(Loglevel.TRACE.to_logging(), '%s', traceback.format_exc())
            return 1
    return wrapper


class PmsmAdp(cli.Application):
    """Trains, simulates and benchmarks ADP torque control of PMSMs."""

    PROGNAME = 'pmsmadp'
    VERSION = pmsmadp.__version__

    verbosity = cli.SwitchAttr(
        ['-v', '--verbosity'], Loglevel.parse, default=Loglevel.INFO,
        help="minimum loglevel written to stderr")

    tee = cli.SwitchAttr(
        '--tee', _tee, list=True,
        help="additionally write log messages at or above <loglevel> to <file>; "
             "given as <file>:<loglevel>, may be repeated")

    def main(self, *args):
        if args:
            print("unknown command {!r}".format(args[0]), file=sys.stderr)
            return 1
        if not self.nested_command:
            self.help()
            return 1
        configure_logging(self.verbosity, dict(self.tee))


@PmsmAdp.subcommand('train')
class Train(cli.Application):
    """Runs offline value iteration and writes the trained weight file.

    The configuration document may contain `motor` (motor parameters or a
    preset reference), `cost` and `training` entries; missing entries take
    their defaults."""

    config = cli.SwitchAttr('--config', cli.ExistingFile, mandatory=True,
                            help="training configuration document")
    out = cli.SwitchAttr('--out', str, mandatory=True, help="weight file to write")
    report = cli.SwitchAttr('--report', str, help="write the per-iteration report as CSV")

    @_guarded
    def main(self):
        data = dict(Document.load(str(self.config)).items())
        p = MotorParams.from_document(data.pop('motor', {'preset': 'nominal'}))
        c = CostSpec.from_document(data.pop('cost', {}))
        cfg = TrainingConfig.from_document(data.pop('training', {}))
        check_empty(data)
        trainer = ValueIteration(cfg, c, p)
        try:
            weights = trainer.run()
        finally:
            if self.report and trainer.report is not None:
                trainer.report.to_csv(self.report)
        weights.save(self.out)
        return 0


@PmsmAdp.subcommand('simulate')
class Simulate(cli.Application):
    """Runs one scenario and writes its trace and metrics to the output
    directory."""

    scenario = cli.SwitchAttr('--scenario', cli.ExistingFile, mandatory=True,
                              help="scenario document")
    weights = cli.SwitchAttr('--weights', cli.ExistingFile,
                             help="weight file for the adp controller")
    out = cli.SwitchAttr('--out', str, mandatory=True, help="output directory")
    seed = cli.SwitchAttr('--seed', int, default=0, help="seed of the sensor noise")

    @_guarded
    def main(self):
        sc = Scenario.load(str(self.scenario))
        os.makedirs(self.out, exist_ok=True)
        trace = run_scenario(sc, self.seed, str(self.weights) if self.weights else None)
        base = os.path.join(self.out, '{}_{}'.format(sc.name, sc.controller))
        trace.to_csv(base + '.csv')
        Document(to_jsonable(trace_metrics(trace, sc))).dump(base + '_metrics.json')
        if not trace.complete:
            print(trace.diagnostic, file=sys.stderr)
            return 1
        return 0


@PmsmAdp.subcommand('compare')
class Compare(cli.Application):
    """Runs a benchmark suite; the exit status is nonzero if any acceptance
    check fails."""

    suite = cli.SwitchAttr('--suite', cli.Set('paper'), default='paper', help="suite to run")
    out = cli.SwitchAttr('--out', str, mandatory=True, help="output directory")
    weights_dir = cli.SwitchAttr('--weights-dir', str,
                                 help="directory with (or to store) the trained weight files")
    workers = cli.SwitchAttr('--workers', cli.Range(1, 1024), default=1,
                             help="number of worker processes")
    seed = cli.SwitchAttr('--seed', int, default=0, help="seed for training and simulation")

    @_guarded
    def main(self):
        summary = ReferenceSuite(self.out, self.weights_dir, self.workers, self.seed).run()
        failed = [c['id'] for c in summary['checks'] if not c['passed']]
        if failed:
            print("failed acceptance checks: {}".format(', '.join(str(i) for i in failed)), file=sys.stderr)
        return 0 if summary['passed'] and not failed else 1


@PmsmAdp.subcommand('metrics')
class Metrics(cli.Application):
    """Recomputes the metrics of a trace file and prints them as JSON.

    Without a scenario, the realized cost uses the default cost weights and
    nominal motor, and no load-step recovery time is computed."""

    trace = cli.SwitchAttr('--trace', cli.ExistingFile, mandatory=True, help="trace CSV file")
    scenario = cli.SwitchAttr('--scenario', cli.ExistingFile, help="scenario document")

    @_guarded
    def main(self):
        sc = Scenario.load(str(self.scenario)) if self.scenario else Scenario()
        trace = SimTrace.from_csv(str(self.trace))
        print(json.dumps(to_jsonable(trace_metrics(trace, sc)), indent=2))
        return 0


def main(argv=None):
    """Console script entry point."""
    if argv is None:
        return PmsmAdp.run()
    _, code = PmsmAdp.run([PmsmAdp.PROGNAME] + list(argv), exit=False)
    return code
