import os
from setuptools import setup, find_packages

# The text of the README file
README = open("README.md").read()

# Get the version number without importing our package
# (which would trigger some ImportError due to missing dependencies)

version_contents = {}
with open(os.path.join("nfadlab", "version.py")) as f:
    exec(f.read(), version_contents)

# This call to setup() does all the work
setup(
    name="nfadlab",
    version=version_contents["__version__"],
    description="Simulator of blinding attacks on NFAD single-photon detectors",
    long_description=README,
    long_description_content_type="text/markdown",
    license="MIT",
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.7",
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "PyYAML",
        "better_exceptions",
        "blessings",
        "eliot",
        "python_forge",
    ],
    entry_points={
        "console_scripts": [
            "nfadlab=nfadlab.cli:main",
        ],
    },
    include_package_data=True,
)
