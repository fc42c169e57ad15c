from setuptools import setup, find_packages

setup(
    name="qpow-cli",
    version="0.1.0",
    packages=find_packages(include=["qpow_cli", "qpow_cli.*"]),
    include_package_data=True,
    package_data={"qpow_cli": ["fixtures/*.yaml"]},
    install_requires=[
        "typer>=0.9.0",
        "rich>=13.7.0",
        "pydantic>=2.6.1",
        "PyYAML>=6.0",
        "numpy>=1.22",
    ],
    extras_require={
        "dev": [
            "pytest>=8.0.0",
            "pytest-cov>=4.1.0",
            "hypothesis>=6.90.0",
            "black>=24.1.1",
            "isort>=5.13.2",
            "mypy>=1.8.0",
            "ruff>=0.2.1",
            "pre-commit>=3.6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "qpow-cli=qpow_cli.cli:main",
        ],
    },
    python_requires=">=3.9",
    author="Your Name",
    author_email="your.email@example.com",
    description="Landauer-limit energy model of classical and quantum Proof-of-Work mining",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
