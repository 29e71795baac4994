from setuptools import find_packages
from setuptools import setup


setup(
    name='boolmac',
    version='0.1.0',
    description='Group testing data collection over a Boolean multiple access channel',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'pandas>=1.0',
    ],
    extras_require={
        'redis': ['redis>=3.0'],
        'test': ['pytest>=6.0', 'hypothesis>=5.0'],
    },
    entry_points={
        'console_scripts': [
            'boolmac=boolmac.cli:main',
        ],
    },
)
