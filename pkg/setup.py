"""
opmod セットアップファイル
"""

from setuptools import setup, find_packages
import os


# README を読み込み
def read_readme():
    try:
        with open("README.md", "r", encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        return "多変数直交多項式の Uvarov / Christoffel 変形と厳密検証"


# バージョンを取得
def get_version():
    version_file = os.path.join("opmod", "__init__.py")
    with open(version_file, "r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("__version__"):
                return line.split('"')[1]
    return "0.1.0"


setup(
    name="opmod",
    version=get_version(),
    author="Yoshihiro Sasaki",
    author_email="sskyh1988@gmail.com",
    description="多変数直交多項式の Uvarov / Christoffel 変形と厳密検証",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    url="https://github.com/sskyh0208/opmod",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"opmod": ["py.typed"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "sympy>=1.12",
        "pydantic>=2.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "pytest-cov>=2.0",
            "hypothesis>=6.0",
            "black>=22.0",
            "flake8>=4.0",
            "mypy>=0.900",
            "isort>=5.0",
            "bandit[toml]>=1.7",
            "safety>=2.0",
        ],
        "fast": [
            "orjson>=3.9.0",
        ],
    },
    entry_points={"console_scripts": ["opmod=opmod.cli:main"]},
    keywords="orthogonal polynomials moment functional uvarov christoffel",
    project_urls={
        "Bug Reports": "https://github.com/sskyh0208/opmod/issues",
        "Source": "https://github.com/sskyh0208/opmod",
        "Documentation": "https://sskyh0208.github.io/opmod/",
    },
)
