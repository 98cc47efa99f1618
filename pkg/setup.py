#!/usr/bin/env python
#  -*- coding: utf-8 -*-
u"""
QGLS Library
------------

Light Through Loss and Gain
```````````````````````````

Describe a linear optical device by its transmission matrix and let QGLS
build the noise it must add:

.. code:: python

    from qgls import coherent_state, gain, loss, mean_photon, purity
    from qgls.gaussian import apply_device

    state = coherent_state(3 + 3j)
    state = apply_device(state, loss(2 / 3))  # coherent 2+2i, still pure
    state = apply_device(state, gain(1.5))  # mean 3+3i again, but thermal

    print(purity(state))  # 0.2857... = 1/3.5
    print(mean_photon(state))  # 19.25 = |3+3i|² + 1.25 thermal photons


Pipelines From the Command Line
```````````````````````````````

.. code:: bash

    $ pip install QGLS
    $ qgls simulate docs/source/tutorial/loss_then_gain.json
    $ qgls wigner docs/source/tutorial/loss_then_gain.json --stage all -o fig.csv
    $ qgls oracle docs/source/tutorial/loss_then_gain.json --dim 80

``simulate`` writes a JSON report (mean, covariance, purity, photon numbers,
thermal occupation and effective temperature of every gain element),
``wigner`` writes plot-ready ``x,p,w`` grids of every stage, and ``oracle``
checks the Gaussian result against a brute-force truncated Fock-space
simulation.

"""
from setuptools import setup

setup(
    name='QGLS',
    version='0.1.0',
    license='MIT',
    author='QGLS contributors',
    description='Quantum states of light through lossy and amplifying linear optical devices.',
    long_description=__doc__,
    long_description_content_type="text/x-rst",
    keywords='quantum optics,gaussian states,wigner function,amplifier noise,input-output relations',
    packages=['qgls'],
    install_requires=[
        'numpy >= 1.17',
        'scipy >= 1.4',
        'wrapt < 2, >= 1.10',
    ],
    entry_points={
        'console_scripts': [
            'qgls = qgls.cli:main',
        ],
    },
    zip_safe=False,
    include_package_data=True,
    platforms='any',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    extras_require={
        'dev': [
            'tox',
            'PyTest',
            'PyTest-Cov',
            'bump2version < 1',
            'sphinx',
            'packaging',
        ]
    },
    python_requires='>=3.8',
)
