"""Fourth-order central finite-difference stencils."""


def step_for(u):
    return max(1e-5, 1e-4 * (1.0 + abs(u)))


def d1(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def d2(f, x, h):
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h)


def d3(f, x, h):
    return (f(x - 3 * h) - 8 * f(x - 2 * h) + 13 * f(x - h)
            - 13 * f(x + h) + 8 * f(x + 2 * h) - f(x + 3 * h)) / (8 * h ** 3)


def d11(f, x, y, h, k):
    """Mixed partial of ``f(x, y)`` by nesting the first-derivative stencil."""
    return d1(lambda s: d1(lambda t: f(s, t), y, k), x, h)
