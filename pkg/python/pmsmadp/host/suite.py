"""Reproduction of the reference experiments: training the nominal and
perturbed actor networks, running the load-step and staircase scenarios for
all three controllers, and checking the results against the acceptance
criteria.

The output directory receives one trace file per scenario and controller
under `traces/`, the metric table `metrics.csv` and the summary document
`summary.json`. Everything except the training time in the summary is a
deterministic function of the seed."""

import concurrent.futures
import math
import os
import time
import traceback
from collections import OrderedDict

import numpy as np
import pandas as pd

from pmsmadp.adp.config import TrainingConfig
from pmsmadp.adp.cost import CostSpec
from pmsmadp.adp.lqr import regulation_model, discounted_lqr
from pmsmadp.adp.trainer import ValueIteration, bellman_residual, one_step_cost, grid_search_control
from pmsmadp.basis.weights import WeightSet
from pmsmadp.common.document import Document
from pmsmadp.common.log import Loggable
from pmsmadp.host import metrics
from pmsmadp.host.scenario import Profile, Scenario
from pmsmadp.host.simulator import run_scenario
from pmsmadp.motor.params import load_preset
from pmsmadp.motor.transforms import rpm_to_rad_s

__all__ = ['CONTROLLERS', 'WEIGHT_SETS', 'reference_scenarios', 'trace_metrics', 'to_jsonable',
           'ReferenceSuite', 'reproduce_reference_suite']

CONTROLLERS = ('adp', 'foc', 'dtc_svm')

# Weight set name -> parameter preset it is trained on.
WEIGHT_SETS = OrderedDict([('nominal', 'nominal'), ('perturbed_exp', 'perturbed_exp')])

METRIC_COLUMNS = [
    'scenario', 'controller', 'samples', 'complete', 'torque_itae', 'speed_itae',
    'realized_cost', 'recovery_time', 'steady_state_error', 'speed_ripple',
    'saturated_fraction', 'out_of_region_fraction',
]

# Length of the window at the end of a run used for steady-state metrics.
STEADY_WINDOW = 0.3

def reference_scenarios():
    """Returns the scenario templates as `{id: (Scenario, weight set)}`.

    The templates use the FOC controller; the suite substitutes each
    controller in turn. Speeds are in rad/s."""
    nominal = load_preset('nominal')
    perturbed_sim = load_preset('perturbed_sim')
    perturbed_exp = load_preset('perturbed_exp')
    staircase = Profile([(0.0, rpm_to_rad_s(500.0)), (0.5, rpm_to_rad_s(1000.0)),
                         (3.0, rpm_to_rad_s(2000.0))])
    return OrderedDict([
        ('a', (Scenario(
            name='a', plant_params=nominal, speed=rpm_to_rad_s(3000.0),
            load=Profile.step(0.0, 0.6, 1.0), duration=2.0), 'nominal')),
        ('b', (Scenario(
            name='b', plant_params=perturbed_sim, controller_params=nominal,
            speed=rpm_to_rad_s(3000.0), load=Profile.step(0.0, 0.6, 1.0), duration=2.0), 'nominal')),
        ('c', (Scenario(
            name='c', plant_params=nominal, speed=rpm_to_rad_s(2000.0),
            load=Profile.step(0.0, 0.7, 2.3), duration=3.0), 'nominal')),
        ('d', (Scenario(
            name='d', plant_params=nominal, speed=staircase, load=0.7, duration=6.0), 'nominal')),
        ('e_load', (Scenario(
            name='e_load', plant_params=nominal, controller_params=perturbed_exp,
            speed=rpm_to_rad_s(2000.0), load=Profile.step(0.0, 0.7, 3.2), duration=4.0),
            'perturbed_exp')),
        ('e_staircase', (Scenario(
            name='e_staircase', plant_params=nominal, controller_params=perturbed_exp,
            speed=staircase, load=0.7, duration=6.0), 'perturbed_exp')),
    ])

def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None

def trace_metrics(trace, sc):
    """Computes the metric table row of one trace."""
    row = OrderedDict(samples=len(trace), complete=trace.complete)
    row['torque_itae'] = metrics.itae(trace, signal='torque')
    row['speed_itae'] = metrics.itae(trace, signal='speed')
    row['realized_cost'] = metrics.realized_cost(trace, sc.cost, sc.plant_params)
    events = sc.load.breakpoints
    if events and events[0] <= trace.duration:
        row['recovery_time'] = metrics.settling_time(trace, events[0], 0.01, signal='speed')
    else:
        row['recovery_time'] = None
    start = max(trace.duration - STEADY_WINDOW, 0.0)
    row['steady_state_error'] = metrics.steady_state_error(trace, start, signal='speed')
    row['speed_ripple'] = metrics.ripple(trace, 'omega_m', start)
    row['saturated_fraction'] = float(np.mean(trace['saturated']))
    row['out_of_region_fraction'] = float(np.mean(trace['out_of_region']))
    return row

def _run_task(task):
    """Runs one scenario for one controller in a worker."""
    sid, sc, seed, path = task
    trace = run_scenario(sc, seed)
    trace.to_csv(path)
    return sid, sc.controller, trace_metrics(trace, sc), trace.diagnostic


class ReferenceSuite(Loggable):
    """Runs the reference experiments into `output_dir`.

    Missing weight sets are trained with `training_config` (default: the
    full-size configuration) and stored in `weights_dir` (default:
    `output_dir/weights`). `scenarios` optionally replaces
    `reference_scenarios()`; `checks` restricts the evaluated acceptance checks
    to the given numbers. With `workers` > 1, scenario runs are spread over
    a process pool; the outputs do not depend on the worker count."""

    _component = 'suite'

    def __init__(self, output_dir, weights_dir=None, workers=1, seed=0,
                 training_config=None, scenarios=None, checks=None):
        super().__init__()
        self.output_dir = output_dir
        self.weights_dir = weights_dir or os.path.join(output_dir, 'weights')
        self.workers = int(workers)
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        self.seed = int(seed)
        self.training_config = training_config or TrainingConfig(seed=self.seed)
        if not isinstance(self.training_config, TrainingConfig):
            raise TypeError("training_config must be a TrainingConfig")
        self.scenarios = scenarios if scenarios is not None else reference_scenarios()
        self.checks = set(checks) if checks is not None else set(range(1, 9))
        self.cost = CostSpec()
        self.failures = []
        self.training = OrderedDict()
        self.weights = OrderedDict()
        self.table = None

    def _fail(self, what, exc):
        self.error("{} failed: {}", what, exc)
        self.trace("{}", traceback.format_exc())
        self.failures.append(OrderedDict(what=what, error='{}: {}'.format(type(exc).__name__, exc)))

    def prepare_weights(self):
        """Loads or trains the weight sets; returns `{name: path}` for the
        ones available."""
        os.makedirs(self.weights_dir, exist_ok=True)
        paths = OrderedDict()
        for name, preset in WEIGHT_SETS.items():
            path = os.path.join(self.weights_dir, name + '.json')
            info = OrderedDict(preset=preset, trained=False, seconds=None)
            try:
                if os.path.isfile(path):
                    self.info("using existing {} weights from {}", name, path)
                    weights = WeightSet.load(path)
                else:
                    self.note("training {} weights", name)
                    start = time.perf_counter()
                    weights = ValueIteration(
                        self.training_config, self.cost, load_preset(preset), name=name).run()
                    info['seconds'] = time.perf_counter() - start
                    info['trained'] = True
                    weights.save(path)
            except Exception as e:
                self._fail('training {} weights'.format(name), e)
                continue
            info['iterations'] = weights.iterations
            info['weight_changes'] = _weight_changes(weights)
            self.training[name] = info
            self.weights[name] = weights
            paths[name] = path
        return paths

    def tasks(self, paths):
        """Expands the scenario templates into `(id, scenario, seed, trace
        path)` tasks, one per controller."""
        trace_dir = os.path.join(self.output_dir, 'traces')
        os.makedirs(trace_dir, exist_ok=True)
        tasks = []
        for sid, (template, weight_set) in self.scenarios.items():
            for kind in CONTROLLERS:
                config = {}
                if kind == 'adp':
                    if weight_set not in paths:
                        self.failures.append(OrderedDict(
                            what='scenario {} with adp'.format(sid),
                            error='{} weights are not available'.format(weight_set)))
                        continue
                    config['weights'] = paths[weight_set]
                sc = template.replace(controller=kind, controller_config=config)
                path = os.path.join(trace_dir, '{}_{}.csv'.format(sid, kind))
                tasks.append((sid, sc, self.seed, path))
        return tasks

    def run_tasks(self, tasks):
        """Runs all tasks and returns the metric table as a `DataFrame`."""
        results = {}
        if self.workers == 1:
            for task in tasks:
                try:
                    results[(task[0], task[1].controller)] = _run_task(task)
                except Exception as e:
                    self._fail('scenario {} with {}'.format(task[0], task[1].controller), e)
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=self.workers) as pool:
                futures = OrderedDict(((t[0], t[1].controller), pool.submit(_run_task, t)) for t in tasks)
                for key, future in futures.items():
                    try:
                        results[key] = future.result()
                    except Exception as e:
                        self._fail('scenario {} with {}'.format(*key), e)

        rows = []
        for task in tasks:
            key = (task[0], task[1].controller)
            if key not in results:
                continue
            sid, kind, row, diagnostic = results[key]
            if diagnostic is not None:
                self.failures.append(OrderedDict(
                    what='scenario {} with {}'.format(sid, kind), error=diagnostic))
            rows.append(OrderedDict([('scenario', sid), ('controller', kind)], **row))
        return pd.DataFrame(rows, columns=METRIC_COLUMNS)

    def _metric(self, sid, kind, column):
        sel = self.table[(self.table['scenario'] == sid) & (self.table['controller'] == kind)]
        if not len(sel):
            raise KeyError("no result for scenario {} with {}".format(sid, kind))
        value = sel[column].iloc[0]
        if value is None or (isinstance(value, float) and math.isnan(value)):
            raise ValueError("{} is undefined for scenario {} with {}".format(column, sid, kind))
        return float(value)

    def _reference(self, sid):
        template, _ = self.scenarios[sid]
        return abs(template.speed.value_at(template.duration))

    # Acceptance checks. Each returns `(passed, details)`.

    def check_training(self):
        details = OrderedDict()
        passed = True
        for name, info in self.training.items():
            changes = info['weight_changes']
            tail = changes[-5:]
            monotone = len(tail) == 5 and all(b < a for a, b in zip(tail, tail[1:]))
            ok = info['iterations'] <= 30 and monotone
            if info['seconds'] is not None:
                ok = ok and info['seconds'] <= 300.0
            details[name] = OrderedDict(
                iterations=info['iterations'], final_weight_changes=tail,
                seconds=info['seconds'], passed=ok)
            passed = passed and ok
        return passed and bool(self.training), details

    def check_lqr(self):
        cfg = self.training_config.replace(
            mode='regulation', critic_degree=2, actor_degree=1,
            sample_count=min(self.training_config.sample_count, 2000),
            validation_count=0)
        p = load_preset('nominal')
        weights = ValueIteration(cfg, self.cost, p, name='regulation').run()
        return _compare_with_lqr(weights, self.cost, p)

    def check_bellman(self):
        weights = self.weights['nominal']
        rng = np.random.default_rng([self.seed, 5])
        cfg = self.training_config
        samples = rng.uniform(-cfg.half_width, cfg.half_width, size=(1000, cfg.input_dim))
        stats = bellman_residual(weights, samples, self.cost, load_preset('nominal'))
        scale = abs(stats.mean_value)
        passed = stats.mean <= 0.01 * scale and stats.max <= 0.1 * scale
        return passed, OrderedDict(stats._asdict())

    def check_actor(self):
        weights = self.weights['nominal']
        p = load_preset('nominal')
        cfg = self.training_config
        rng = np.random.default_rng([self.seed, 6])
        points = rng.uniform(-cfg.half_width, cfg.half_width, size=(100, cfg.input_dim))
        worst = -math.inf
        for eta in points:
            u = weights.actor_output(eta)
            actor_cost = one_step_cost(eta, u, weights, self.cost, p)
            _, grid_cost = grid_search_control(eta, weights, self.cost, p, pitch=0.25)
            worst = max(worst, actor_cost - grid_cost)
        return worst <= 1e-3, OrderedDict(worst_gap=worst, points=len(points))

    def check_nominal_load_step(self):
        recovery = OrderedDict((k, self._metric('a', k, 'recovery_time')) for k in CONTROLLERS)
        itae = OrderedDict((k, self._metric('a', k, 'torque_itae')) for k in CONTROLLERS)
        passed = all(r <= 0.3 for r in recovery.values()) \
            and itae['adp'] <= itae['foc'] < itae['dtc_svm']
        return passed, OrderedDict(recovery_time=recovery, torque_itae=itae)

    def check_uncertain_load_step(self):
        ref = self._reference('b')
        error = OrderedDict((k, self._metric('b', k, 'steady_state_error') / ref) for k in CONTROLLERS)
        spread = OrderedDict((k, self._metric('b', k, 'speed_ripple') / ref) for k in CONTROLLERS)
        baseline_fails = any(error[k] > 0.05 or spread[k] > 0.02 for k in ('foc', 'dtc_svm'))
        passed = error['adp'] <= 0.02 and baseline_fails
        return passed, OrderedDict(relative_error=error, relative_ripple=spread)

    def check_uncertain_staircase(self):
        itae = OrderedDict((k, self._metric('e_staircase', k, 'speed_itae')) for k in CONTROLLERS)
        passed = itae['adp'] < itae['foc'] and itae['adp'] < itae['dtc_svm']
        return passed, OrderedDict(speed_itae=itae)

    def check_realized_cost(self):
        # A lower cost only counts if ADP holds the speed and recovers from
        # the load step.
        error = self._metric('c', 'adp', 'steady_state_error') / self._reference('c')
        recovery = self._metric('c', 'adp', 'recovery_time')
        tracks = error <= 0.01 and recovery <= 0.3
        cost = OrderedDict((k, self._metric('c', k, 'realized_cost')) for k in CONTROLLERS)
        passed = tracks and cost['adp'] <= cost['foc'] and cost['adp'] <= cost['dtc_svm']
        return passed, OrderedDict(
            adp_tracks=tracks, adp_relative_error=error, adp_recovery_time=recovery,
            realized_cost=cost)

    CHECKS = OrderedDict([
        (1, ('training convergence', 'check_training')),
        (2, ('regulation critic and actor match the discounted LQR solution', 'check_lqr')),
        (3, ('Bellman residual on fresh samples', 'check_bellman')),
        (4, ('actor action matches grid search over the voltage disk', 'check_actor')),
        (5, ('nominal load step: recovery and torque ITAE ordering', 'check_nominal_load_step')),
        (6, ('load step with perturbed plant: only ADP tracks', 'check_uncertain_load_step')),
        (7, ('staircase with perturbed model: ADP speed ITAE lowest', 'check_uncertain_staircase')),
        (8, ('2000 rpm load step: ADP tracks with the lowest realized cost', 'check_realized_cost')),
    ])

    def evaluate_checks(self):
        results = []
        for number, (description, method) in self.CHECKS.items():
            if number not in self.checks:
                continue
            entry = OrderedDict(id=number, description=description)
            try:
                passed, details = getattr(self, method)()
                entry['passed'] = bool(passed)
                entry['details'] = to_jsonable(details)
                if not passed:
                    self.failures.append(OrderedDict(
                        what='acceptance check {}'.format(number),
                        error='check failed: {}'.format(description)))
            except Exception as e:
                self._fail('acceptance check {}'.format(number), e)
                entry['passed'] = False
                entry['details'] = OrderedDict(error='{}: {}'.format(type(e).__name__, e))
            self.log_check(entry)
            results.append(entry)
        return results

    def log_check(self, entry):
        if entry['passed']:
            self.note("check {} passed: {}", entry['id'], entry['description'])
        else:
            self.warn("check {} FAILED: {}", entry['id'], entry['description'])

    def run(self):
        """Runs the suite and returns the summary `Document`."""
        os.makedirs(self.output_dir, exist_ok=True)
        paths = self.prepare_weights()
        tasks = self.tasks(paths)
        self.info("running {} scenario runs on {} worker(s)", len(tasks), self.workers)
        self.table = self.run_tasks(tasks)
        self.table.to_csv(os.path.join(self.output_dir, 'metrics.csv'), index=False, float_format='%.17g')

        checks = self.evaluate_checks()
        scenarios = OrderedDict()
        for row in self.table.to_dict('records'):
            entry = scenarios.setdefault(row.pop('scenario'), OrderedDict())
            entry[row.pop('controller')] = row
        summary = Document(
            seed=self.seed,
            weights=dict(paths),
            training=to_jsonable(self.training),
            scenarios=to_jsonable(scenarios),
            checks=to_jsonable(checks),
            failures=[dict(f) for f in self.failures],
            passed=bool(checks) and all(c['passed'] for c in checks) and not self.failures)
        summary.dump(os.path.join(self.output_dir, 'summary.json'))
        self.note("suite {}: {} of {} checks passed, {} failure(s)",
                  'passed' if summary['passed'] else 'FAILED',
                  sum(c['passed'] for c in checks), len(checks), len(self.failures))
        return summary


def _weight_changes(weights):
    h = weights.history
    return [float(np.max(np.abs(b - a))) for a, b in zip(h, h[1:])]

def to_jsonable(ob):
    """Converts numpy scalars and containers to plain JSON types; non-finite
    floats become `None`."""
    if isinstance(ob, dict):
        return {str(k): to_jsonable(v) for k, v in ob.items()}
    if isinstance(ob, (list, tuple)):
        return [to_jsonable(x) for x in ob]
    if isinstance(ob, (bool, np.bool_)):
        return bool(ob)
    if isinstance(ob, (int, np.integer)):
        return int(ob)
    if isinstance(ob, (float, np.floating)):
        return _finite_or_none(ob)
    return ob

def _compare_with_lqr(weights, c, p):
    """Compares a regulation-mode weight set with the discounted LQR
    solution. Returns `(passed, details)`."""
    n = weights.normalizer
    model = regulation_model(p, c, n)
    K, P = discounted_lqr(model.A, model.B, model.Q, model.R, model.gamma)
    exps = {e: i for i, e in enumerate(weights.critic_basis.term_exponents)}
    w = weights.critic_weights
    critic = np.array([[w[exps[(2, 0)]], 0.5 * w[exps[(1, 1)]]],
                       [0.5 * w[exps[(1, 1)]], w[exps[(0, 2)]]]])
    lin = {e: i for i, e in enumerate(weights.actor_basis.term_exponents)}
    a = weights.actor_weights
    gain = model.H - np.array([a[lin[(1, 0)]], a[lin[(0, 1)]]]).T / n.v_scale
    critic_error = float(np.max(np.abs(critic - P)) / np.max(np.abs(P)))
    gain_error = float(np.max(np.abs(gain - K)) / np.max(np.abs(K)))
    details = OrderedDict(
        critic_relative_error=critic_error, gain_relative_error=gain_error,
        riccati=P.tolist(), lqr_gain=K.tolist(), critic=critic.tolist(), actor_gain=gain.tolist())
    return critic_error <= 0.01 and gain_error <= 0.02, details

def reproduce_reference_suite(output_dir, weights_dir=None, workers=1, seed=0, training_config=None):
    """Runs the reference experiments and writes their outputs to
    `output_dir`; returns the summary `Document`. See `ReferenceSuite`."""
    return ReferenceSuite(output_dir, weights_dir, workers, seed, training_config).run()
