def pytest_addoption(parser):
    parser.addoption(
        "--samples",
        action="store",
        type=int,
        default=250,
        help="Number of random seeds for the series property tests; each seed builds four operands",
    )
