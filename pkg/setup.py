from setuptools import setup, find_packages
import os
import re


def get_version():
    """Read version from cr_discs/__init__.py"""
    init_path = os.path.join(os.path.dirname(__file__), "cr_discs", "__init__.py")
    with open(init_path, "r") as f:
        content = f.read()
        match = re.search(r'^__version__\s*=\s*[\'"]([^\'"]*)[\'"]', content, re.MULTILINE)
        if match:
            return match.group(1)
        raise RuntimeError("Unable to find version string in cr_discs/__init__.py")


setup(
    name="cr-discs",
    version=get_version(),
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"cr_discs": ["scenarios/*.json"]},
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "sympy>=1.12",
        "colorama>=0.4.6",
        "click>=8.1.3",
        "tomli>=2.0.0; python_version < '3.11'",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "hypothesis>=6.80.0",
            "black>=23.0.0",
            "isort>=5.0.0",
            "flake8>=6.0.0",
            "pylint>=3.0.0",
        ],
        "test": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "hypothesis>=6.80.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "cr-discs=cr_discs.cli:main",
        ],
    },
    author="cr-discs developers",
    author_email="example@example.com",
    description="Analytic discs attached to generic CR manifolds: Bishop's equation, defects, wedge extension and removability experiments",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    url="https://github.com/example/cr-discs",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU Affero General Public License v3",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
)
