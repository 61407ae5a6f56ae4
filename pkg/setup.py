from setuptools import setup, find_packages

setup(
    name="fareyprod",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=[
        'click>=8.1.0',
        'python-dotenv>=1.0.0',
        'toml>=0.10.2',
        'pydantic>=2.6.1',
        'numpy>=1.24.0',  # sieve and series arrays
        'sympy>=1.12',  # primality of user-supplied p, prime ranges
    ],
    entry_points={
        'console_scripts': [
            'fareyprod=fareyprod.cli:cli',
        ],
    },
)
