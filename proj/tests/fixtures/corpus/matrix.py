"""Dense matrix helpers on plain nested lists."""


def zeros(rows, cols):
    return [[0.0] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1.0
    return m


def shape(m):
    if not m:
        return (0, 0)
    return (len(m), len(m[0]))


def transpose(m):
    return [list(row) for row in zip(*m)]


def matmul(a, b):
    rows_a, cols_a = shape(a)
    rows_b, cols_b = shape(b)
    if cols_a != rows_b:
        raise ValueError(f"incompatible shapes {shape(a)} x {shape(b)}")
    out = zeros(rows_a, cols_b)
    for i in range(rows_a):
        for k in range(cols_a):
            scale = a[i][k]
            if scale == 0.0:
                continue
            row_b = b[k]
            row_out = out[i]
            for j in range(cols_b):
                row_out[j] += scale * row_b[j]
    return out


def scale(m, factor):
    return [[value * factor for value in row] for row in m]


def add(a, b):
    if shape(a) != shape(b):
        raise ValueError("shape mismatch")
    return [
        [x + y for x, y in zip(row_a, row_b)]
        for row_a, row_b in zip(a, b)
    ]


def trace(m):
    rows, cols = shape(m)
    return sum(m[i][i] for i in range(min(rows, cols)))


def frobenius_norm(m):
    total = 0.0
    for row in m:
        for value in row:
            total += value * value
    return total ** 0.5
