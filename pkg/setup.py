from setuptools import setup, find_packages


requirements = [
    'scruffington>=0.3.6',
    'pyyaml',
    'numpy>=1.17',
    'pandas',
    'blessed',
    'requests',
]

test_requirements = [
    'pynose',
    'pytest',
    'mock',
]


setup(
    name="asymboost",
    version="0.1.0",
    description="Asymmetric AdaBoost with class-conditional weight tracking and experiment tooling",
    license="MIT",
    keywords="adaboost boosting cost-sensitive asymmetric imbalanced classification decision stump",
    packages=find_packages(exclude=['tests', 'examples']),
    install_requires=requirements,
    tests_require=test_requirements,
    extras_require={'test': test_requirements},
    python_requires='>=3.6',
    package_data={'asymboost': ['config/*']},
    entry_points={
        'console_scripts': ['asymboost=asymboost:main'],
    },
    zip_safe=False
)
