"""Python laboratory for optimal torque and speed control of permanent-magnet
synchronous motors.

The package trains a value-iteration adaptive dynamic programming (ADP)
controller offline (`pmsmadp.adp`), runs it online against a simulated PMSM
plant (`pmsmadp.motor`, `pmsmadp.host`), and benchmarks it against field
oriented control and DTC-SVM baselines (`pmsmadp.control`) under nominal and
perturbed motor parameters.
"""

__version__ = '0.1.0'

__all__ = ['common', 'motor', 'basis', 'adp', 'control', 'host']

# Don't try to output documentation for the test module.
__pdoc__ = {'tests': False}

from pmsmadp import common
from pmsmadp import motor
from pmsmadp import basis
from pmsmadp import adp
from pmsmadp import control
from pmsmadp import host
