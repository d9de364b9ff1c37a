from setuptools import setup, find_packages

setup(
    name='tubespectra',
    version='0.1.0',
    description='Spectra of Schroedinger operators on graphyne nanotubes',
    install_requires=['docopt', 'regex', 'numpy', 'scipy>=1.7'],
    tests_require=['hypothesis'],
    extras_require={'test': ['hypothesis']},
    entry_points={
        'console_scripts': ['tubespectra = tubespectra.cli:main'],
    },
    packages=find_packages(exclude=('tests', 'docs')),
    test_suite='tests')
