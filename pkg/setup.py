#!/usr/bin/env python3

import os
import shutil
from distutils.command.sdist import sdist as _sdist
from distutils.command.clean import clean as _clean
from setuptools.command.egg_info import egg_info as _egg_info
from setuptools import setup, find_packages

with open('python/pmsmadp/__init__.py', 'r') as f:
    version = next(filter(lambda x: x.startswith('__version__ = '),
                          f.readlines()), "__version__ = '?.?.?'").split("'")[1]

target_dir = os.getcwd() + "/target"
py_target_dir = target_dir + "/python"
dist_dir = py_target_dir + "/dist"


def read(fname):
    with open(os.path.join(os.path.dirname(__file__), fname)) as f:
        return f.read()


class clean(_clean):
    def run(self):
        _clean.run(self)
        shutil.rmtree(py_target_dir, ignore_errors=True)


class sdist(_sdist):
    def finalize_options(self):
        _sdist.finalize_options(self)
        self.dist_dir = dist_dir


class egg_info(_egg_info):
    def initialize_options(self):
        _egg_info.initialize_options(self)
        os.makedirs(py_target_dir, exist_ok=True)
        self.egg_base = py_target_dir


setup(
    name='pmsmadp',
    version=version,

    author='pmsmadp developers',
    author_email='',
    description='Value-iteration ADP torque control for PMSMs, with FOC and DTC-SVM baselines',
    license="Apache-2.0",

    long_description=read('README.md'),
    long_description_content_type='text/markdown',

    classifiers=[
        "License :: OSI Approved :: Apache Software License",

        "Operating System :: POSIX :: Linux",
        "Operating System :: MacOS",

        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",

        "Topic :: Scientific/Engineering"
    ],

    packages=find_packages('python'),
    package_dir={
        '': 'python',
    },
    package_data={
        'pmsmadp.motor': ['presets/*.json'],
    },

    cmdclass={
        'clean': clean,
        'egg_info': egg_info,
        'sdist': sdist,
    },

    entry_points={
        'console_scripts': [
            'pmsmadp = pmsmadp.cli:main',
        ],
    },

    install_requires=[
        'cbor',
        'numpy',
        'pandas',
        'plumbum',
        'scipy',
    ],

    tests_require=[
        'nose'
    ],
    test_suite='nose.collector',

    zip_safe=False,
)
