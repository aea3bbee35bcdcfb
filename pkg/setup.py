from setuptools import setup, find_packages

setup(
    name="iron-fi",
    version="0.1.0",
    description="Fully implicit inertial-resolvent stochastic optimizer with exact stationary analysis",
    author="Sumit Asthana",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    py_modules=["cli", "exceptions"],
    package_data={"config": ["*.yaml"]},
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "pydantic>=2.0",
        "pyyaml>=6.0",
        "python-dotenv>=1.0",
        "structlog>=23.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-cov>=4.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "iron-fi=cli:main",
        ],
    },
)
