"""
# django-thurston

Piecewise-linear Thurston maps for Django projects: validation, orbifolds,
obstructions, Levy cycles, decompositions and combinatorial equivalence.
"""
import os

from setuptools import find_packages, setup

# Get the long description from the relevant file
here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="django-thurston",
    version="0.1.0",
    license="MIT",
    description="""
    Piecewise-linear Thurston maps: obstructions, decompositions and equivalence.
    """,
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        # How mature is this project? Common values are
        #   3 - Alpha
        #   4 - Beta
        #   5 - Production/Stable
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Framework :: Django",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
    keywords="thurston map branched cover obstruction levy cycle orbifold",
    packages=find_packages(exclude=[".github", "docs", "tests", "example_project"]),
    package_data={"thurston": ["schema/*.json"]},
    install_requires=[
        "django>=3.2",
        "djangorestframework>=3.12",
        "humanize",
        "sympy>=1.14",
        "networkx>=2.6",
        "jsonschema>=3.2",
    ],
    entry_points={"console_scripts": ["thurston=thurston.cli:main"]},
    # List additional groups of dependencies here (e.g. development
    # dependencies). You can install these using the following syntax,
    # for example:
    # $ pip install -e .[dev,test]
    extras_require={
        "dev": ["black", "flake8", "isort"],
        "test": ["black", "flake8", "isort", "coverage"],
    },
)
