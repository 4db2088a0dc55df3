"""Exception types shared across the package."""


class NonadBandError(Exception):
    """Base class for all package-specific errors."""


class PoleProximityError(NonadBandError):
    """Requested energy sits too close to an oscillator eigenvalue.

    The closed-form resolvent has simple poles at the eigenenergies; inside
    the guard radius the gamma prefactor loses all significant digits, so the
    evaluation refuses instead of returning garbage.
    """

    def __init__(self, energy: complex, pole: float, guard: float):
        self.energy = energy
        self.pole = pole
        self.guard = guard
        super().__init__(
            f"energy {energy!r} is within {guard:.3e} of the eigenvalue "
            f"{pole!r}; shift the energy or add a larger imaginary part"
        )


class ResonanceError(NonadBandError):
    """The two-state coupling denominator vanished (coupled-system resonance)."""

    def __init__(self, energy: complex, denominator: complex):
        self.energy = energy
        self.denominator = denominator
        super().__init__(
            f"coupling denominator {denominator!r} at energy {energy!r} is "
            "numerically zero: the energy hits a resonance of the coupled system"
        )


class ConvergenceError(NonadBandError):
    """An iterative routine failed to reach its tolerance."""


class BranchSelectionError(NonadBandError):
    """No quadratic-closure root satisfies the branch rule.

    Raised instead of silently picking a root; carries both candidates.
    """

    def __init__(self, roots, detail: str):
        self.roots = tuple(roots)
        super().__init__(f"{detail}; candidate roots {self.roots!r}")


class ChainIterationError(NonadBandError):
    """Site-attachment recursion failed; records which site broke it."""

    def __init__(self, site_index: int, detail: str):
        self.site_index = site_index
        super().__init__(f"site {site_index}: {detail}")


class ConfigError(NonadBandError):
    """Invalid or inconsistent run configuration.

    Collects every individual problem so a user can fix a config file in one
    pass rather than one error at a time.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
