"""Contains everything needed to run closed-loop experiments.

A single scenario is run like this:

    from pmsmadp.host import Scenario, Profile, Simulator, itae
    from pmsmadp.motor import rpm_to_rad_s

    sc = Scenario(
        controller='adp', controller_config={'weights': 'nominal.json'},
        speed=rpm_to_rad_s(3000), load=Profile.step(0.0, 0.6, 1.0), duration=2.0)
    with Simulator(sc) as sim:
        while sim.step() is not None:
            pass
    trace = sim.result
    print(itae(trace, signal='torque'))

`reproduce_reference_suite()` runs the complete set of reference experiments
and checks their outcome.
"""

__all__ = [ #@
    'Profile',
    'Scenario',
    'SimTrace',
    'Simulator',
    'run_scenario',
    'itae',
    'realized_cost',
    'settling_time',
    'ripple',
    'steady_state_error',
    'ReferenceSuite',
    'reference_scenarios',
    'reproduce_reference_suite',
]

from pmsmadp.host.scenario import Profile, Scenario
from pmsmadp.host.trace import SimTrace
from pmsmadp.host.simulator import Simulator, run_scenario
from pmsmadp.host.metrics import itae, realized_cost, settling_time, ripple, steady_state_error
from pmsmadp.host.suite import ReferenceSuite, reference_scenarios, reproduce_reference_suite
