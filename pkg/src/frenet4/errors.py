"""Exception hierarchy shared by every module of the package."""


class Frenet4Error(ValueError):
    """Base class for all errors raised by frenet4."""


class DegenerateInput(Frenet4Error):
    pass


class TooFewSamples(Frenet4Error):
    pass


class IndexOutOfRange(Frenet4Error, IndexError):
    pass


class StencilUnavailable(Frenet4Error):
    pass


class RankDeficient(Frenet4Error):
    """Raised by Gram-Schmidt when input vector ``index`` (1-based) is dependent."""

    def __init__(self, index, residual, tol):
        self.index = index
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"vector {index} is (numerically) dependent on its predecessors: "
            f"residual {residual:.3e} < tol {tol:.3e}"
        )


class CurvatureVanishes(Frenet4Error):
    """A curvature ``kappa_index`` fell below the admissible floor at ``sample``."""

    def __init__(self, index, sample, value=None, floor=None):
        self.index = index
        self.sample = sample
        self.value = value
        self.floor = floor
        msg = f"curvature kappa{index} vanishes at sample {sample}"
        if value is not None and floor is not None:
            msg += f" (|kappa{index}| = {abs(value):.3e} < {floor:.3e})"
        super().__init__(msg)


class NotUnitSpeed(Frenet4Error):
    pass


class InvalidBracket(Frenet4Error):
    pass


class BadInitialFrame(Frenet4Error):
    pass


class ProfileTooCoarse(Frenet4Error):
    def __init__(self, product, bound):
        self.product = product
        self.bound = bound
        super().__init__(
            f"h * max|kappa| = {product:.4g} exceeds the accuracy bound {bound:g}; "
            "refine the grid"
        )


class UnknownFamily(Frenet4Error):
    pass


class ParamOutOfRange(Frenet4Error):
    pass


class SquareRootDomain(Frenet4Error):
    def __init__(self, minimum, floor, suggested_D):
        self.minimum = minimum
        self.floor = floor
        self.suggested_D = suggested_D
        super().__init__(
            f"D + 2*int(kappa2*R) reaches {minimum:.4g} < floor {floor:g}; "
            f"try D >= {suggested_D:.6g}"
        )
