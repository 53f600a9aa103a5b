from setuptools import setup, find_packages

setup(
    name="steinercut",
    version="0.1",
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    install_requires=[
        'numpy>=1.24.3',
        'networkx>=3.2.1',
        'pyyaml>=6.0',
        'click>=8.1.0',
        'rich>=10.0.0',
        'prometheus_client>=0.17.0'
    ],
    extras_require={
        'test': [
            'pytest>=7.0.0',
            'hypothesis>=6.80.0'
        ]
    },
    entry_points={
        'console_scripts': [
            'steinercut=steinercut.harness.cli:main',
        ],
    }
)
