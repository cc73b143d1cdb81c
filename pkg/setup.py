import codecs
from os import path
from setuptools import setup, find_packages

read = lambda filepath: codecs.open(filepath, 'r', 'utf-8').read()

setup(
    name='maglab',
    description='Magnitude and maximum diversity of finite metric spaces.',
    long_description=read(path.join(path.dirname(__file__), 'README.rst')),
    version='0.1.0',
    license='BSD',
    packages=find_packages(exclude=['examples', 'examples.*']),
    include_package_data = True,
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
        'networkx>=2.4',
        'joblib>=0.14',
    ],
    extras_require={
        'test': ['pytest', 'mock', 'hypothesis'],
        'docs': ['Sphinx'],
    },
    entry_points={
        'console_scripts': ['maglab = maglab.cli:main'],
    },
    classifiers = [
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
