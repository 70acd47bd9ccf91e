#
# Distributed under the Apache License, Version 2.0. See LICENSE for more info.
#

""" Installation script for the narx-attn package.
"""

from setuptools import setup, find_packages
import re
import io

__version__ = re.search(
    r'__version__\s*=\s*[\'"]([^\'"]*)[\'"]',
    io.open('narx_attn/__init__.py', encoding='utf_8_sig').read()
    ).group(1)

setup(
    name="narx-attn",
    version=__version__,
    description="Dual-stage attention recurrent networks for NARX time series prediction.",
    long_description=io.open('README.md', encoding='utf_8').read(),
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['test', 'test.*']),
    package_data={},
    test_suite='test',
    python_requires='>=3.8',
    install_requires=[
        'graphviz',
        'numpy>=1.20',
        'pandas>=1.1',
        'pyparsing'
    ],
    entry_points={
        'console_scripts': [
            'narx-attn = narx_attn.cli:main'
        ]
    },
    license='Apache 2.0',
    classifiers=[
        'Intended Audience :: Science/Research',
        'Intended Audience :: Developers',
        'License :: OSI Approved :: Apache Software License',
        "Operating System :: POSIX",
        "Operating System :: MacOS :: MacOS X",
        "Operating System :: Microsoft :: Windows",
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10'
    ]
)
