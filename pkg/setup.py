from setuptools import setup, find_packages

setup(
    name='hardylab',
    version='0.1.0',
    description='Numerical lab for multipolar Hardy inequalities on space forms',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    author='hardylab Contributors',
    license='MIT',
    packages=find_packages(exclude=['tests', 'tests.*']),
    python_requires='>=3.9',
    install_requires=[
        'click',
        'rich',
        'python-dotenv',
        'pandas',
        'numpy',
        'scipy',
    ],
    extras_require={
        'dev': [
            'pytest',
            'pytest-cov',
            'hypothesis',
        ],
    },
    entry_points={
        'console_scripts': [
            'hardylab=hardylab.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
