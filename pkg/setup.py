from setuptools import setup

setup(
    name='dirac-scattering-utilities',
    version='1.0',
    description='Command-line laboratory for 1D Dirac scattering on chirp potentials',
    license='Apache 2.0',
    packages=[
        'diracutil',
        'multilinear_core',
        'scattering',
        'signal_model',
        'spectral_tools',
        'tests',
        'utilities_common',
    ],
    package_data={
        'diracutil': ['aliases.ini'],
        'tests': ['diracutil_input/*'],
    },
    entry_points={
        'console_scripts': [
            'diracutil = diracutil.main:cli',
        ]
    },
    python_requires='>=3.8',
    install_requires=[
        'click>=7.0',
        'numpy>=1.22',
        'scipy>=1.12',
        'tabulate>=0.8.2',
    ],
    setup_requires=[
        'pytest-runner',
        'wheel'
    ],
    tests_require=[
        'pytest',
        'pytest-cov',
        'mock>=2.0.0',
        'hypothesis',
    ],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Natural Language :: English',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    keywords='dirac scattering multilinear oscillatory integrals chirp cli CLI',
)
