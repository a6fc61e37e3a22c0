from setuptools import find_packages, setup

setup(
    name="pyStreamTable",
    version="1.0",
    description="Exact StreamTable layouts: greedy layout, height optimisation, order search and hardness instances",
    license="MIT",
    packages=find_packages(exclude=("tests",)),
    python_requires=">=3.9",
    install_requires=[
        "networkx>=2.6",
        "numpy>=1.20",
    ],
    extras_require={
        "tests": ["pytest>=7"],
    },
    entry_points={
        "console_scripts": [
            "pystreamtable = pyStreamTable.cli:main",
        ],
    },
)
