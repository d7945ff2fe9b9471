"""Exception hierarchy shared by the solver, root finders and the benchmark."""


class P3PError(ValueError):
    pass


class InvalidPolynomial(P3PError):
    """All-zero or non-finite polynomial coefficients."""


class DegenerateConfiguration(P3PError):
    """The feature triad admits no isolated pose."""


class DegenerateCollinearFeatures(DegenerateConfiguration):
    pass


class DegenerateBearings(DegenerateConfiguration):
    pass


class DegenerateParallel(DegenerateConfiguration):
    pass


class SignUndetermined(DegenerateConfiguration):
    pass


class CandidateRejected(P3PError):
    """A single quartic root does not lead to a usable pose."""


class DegenerateDenominator(CandidateRejected):
    pass


class NonPositiveDepth(CandidateRejected):
    pass


class RankDeficient(P3PError):
    pass


class GeneratorExhausted(RuntimeError):
    pass


class ConfigError(ValueError):
    pass
