#!/usr/bin/env python
# setup.py is provided for compatibility with older tools
# The actual build configuration is in pyproject.toml

from setuptools import setup

if __name__ == "__main__":
    setup(
        name="mono3d-toolkit",
        version="0.1.0",
        description="Geometry-based distance decomposition, KITTI evaluation and Monte-Carlo checks for monocular 3D detection",
        author="Michael Willis",
        author_email="mwillis775@gmail.com",
        packages=[
            "mono3d",
            "mono3d.core",
            "mono3d.losses",
            "mono3d.scoring",
            "mono3d.kitti",
            "mono3d.eval",
            "mono3d.simulate",
            "mono3d.cli",
        ],
        package_dir={"": "src"},
        install_requires=[
            "pydantic>=2.6.4",
            "python-dotenv>=1.0.1",
            "numpy>=1.26.4",
            "scipy>=1.12.0",
        ],
        extras_require={
            "test": ["pytest", "pytest-cov", "pytest-benchmark", "hypothesis"],
        },
        entry_points={
            "console_scripts": [
                "mono3d=mono3d.cli.main:main",
            ],
        },
        classifiers=[
            "Development Status :: 4 - Beta",
            "Intended Audience :: Developers",
            "Intended Audience :: Science/Research",
            "License :: OSI Approved :: MIT License",
            "Programming Language :: Python :: 3",
            "Programming Language :: Python :: 3.10",
            "Programming Language :: Python :: 3.11",
        ],
    )
