#include "motx/fp.hpp"

#include "motx/errors.hpp"

namespace motx {

int normMod(long long x, int l) {
    long long r = x % l;
    if (r < 0)
        r += l;
    return (int)r;
}

int invMod(int c, int l) {
    c = normMod(c, l);
    if (c == 0)
        throw internalError("invMod of zero");
    int r = 1;
    // l is tiny; brute force is fine and has no edge cases.
    for (int j = 1; j < l; ++j) {
        if (c * j % l == 1) {
            r = j;
            break;
        }
    }
    return r;
}

bool isOddPrime(int l) {
    if (l < 3 || l % 2 == 0)
        return false;
    for (int d = 3; (long long)d * d <= l; d += 2)
        if (l % d == 0)
            return false;
    return true;
}

int binomMod(long long i, long long j, int l) {
    if (j < 0 || j > i)
        return 0;
    // Lucas: product of digit binomials base l.
    long long r = 1;
    while (i > 0 || j > 0) {
        long long id = i % l, jd = j % l;
        if (jd > id)
            return 0;
        // digit binomial via multiplicative formula, all values < l
        long long num = 1, den = 1;
        for (long long k = 0; k < jd; ++k) {
            num = num * ((id - k) % l) % l;
            den = den * ((k + 1) % l) % l;
        }
        r = r * num % l * invMod((int)den, l) % l;
        i /= l;
        j /= l;
    }
    return (int)r;
}

namespace {

// Returns the row echelon form in place; pivot columns appended to pivots.
void echelon(FpMat& m, std::vector<int>& pivots) {
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int r = row; r < m.rows; ++r) {
            if (m.at(r, col) != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0)
            continue;
        if (piv != row)
            for (int c = 0; c < m.cols; ++c)
                std::swap(m.at(piv, c), m.at(row, c));
        int inv = invMod(m.at(row, col), m.l);
        for (int c = 0; c < m.cols; ++c)
            m.at(row, c) = m.at(row, c) * inv % m.l;
        for (int r = 0; r < m.rows; ++r) {
            if (r == row || m.at(r, col) == 0)
                continue;
            int f = m.at(r, col);
            for (int c = 0; c < m.cols; ++c)
                m.at(r, c) = normMod(m.at(r, c) - (long long)f * m.at(row, c), m.l);
        }
        pivots.push_back(col);
        ++row;
    }
}

}  // namespace

int rankFp(FpMat m) {
    std::vector<int> pivots;
    echelon(m, pivots);
    return (int)pivots.size();
}

bool solveFp(const FpMat& A, const std::vector<int>& b, std::vector<int>& x) {
    FpMat aug(A.l, A.rows, A.cols + 1);
    for (int r = 0; r < A.rows; ++r) {
        for (int c = 0; c < A.cols; ++c)
            aug.at(r, c) = normMod(A.at(r, c), A.l);
        aug.at(r, A.cols) = normMod(b[(size_t)r], A.l);
    }
    std::vector<int> pivots;
    echelon(aug, pivots);
    x.assign((size_t)A.cols, 0);
    for (size_t k = 0; k < pivots.size(); ++k) {
        if (pivots[k] == A.cols)
            return false;  // pivot in the augmented column: inconsistent
    }
    // Rows of the echelon form read off one solution directly.
    int row = 0;
    for (int piv : pivots) {
        x[(size_t)piv] = aug.at(row, A.cols);
        ++row;
    }
    return true;
}

std::vector<std::vector<int>> nullspaceFp(const FpMat& A) {
    FpMat m = A;
    for (auto& v : m.a)
        v = normMod(v, m.l);
    std::vector<int> pivots;
    echelon(m, pivots);
    std::vector<bool> isPivot((size_t)A.cols, false);
    for (int p : pivots)
        isPivot[(size_t)p] = true;
    std::vector<std::vector<int>> basis;
    for (int freeCol = 0; freeCol < A.cols; ++freeCol) {
        if (isPivot[(size_t)freeCol])
            continue;
        std::vector<int> v((size_t)A.cols, 0);
        v[(size_t)freeCol] = 1;
        for (size_t k = 0; k < pivots.size(); ++k)
            v[(size_t)pivots[k]] = normMod(-m.at((int)k, freeCol), m.l);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace motx
