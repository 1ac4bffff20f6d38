#!/usr/bin/env python
from setuptools import find_packages, setup

long_description = ""

with open("README.rst") as f:
    long_description = f.read()


def extras_require():
    return {
        "test": [
            "tox>=3.0",
            "pytest>=6.0",
            "pytest-cov>=2.10",
        ],
    }


def install_requires():
    return [
        "numpy>=1.22",
        "scipy>=1.11",
        "pydantic>=2.0",
        "python-interface>=1.6",
    ]


setup(
    name="python-discoqa",
    version="0.1.0",
    description="Grammar-aware question answering with simulated quantum circuits",
    packages=find_packages(),
    package_data={"discoqa": ["configs/*.cfg"]},
    long_description=long_description,
    license="Apache 2.0",
    python_requires=">=3.9",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: Apache Software License",
        "Natural Language :: English",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
        "Topic :: Text Processing :: Linguistic",
    ],
    install_requires=install_requires(),
    extras_require=extras_require(),
    entry_points={
        "console_scripts": ["discoqa = discoqa.cli:main"],
    },
)
