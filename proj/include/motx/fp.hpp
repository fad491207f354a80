#pragma once

#include <cstdint>
#include <vector>

namespace motx {

// Arithmetic in F_l for a small odd prime l, plus the dense row-reduction
// kernel used when a computation is materialized on a single bidegree slice.

int normMod(long long x, int l);
int invMod(int c, int l);
bool isOddPrime(int l);

// Binomial coefficient mod l (i, j up to a few thousand; Pascal recursion).
int binomMod(long long i, long long j, int l);

// Dense matrix over F_l, row major. Rows/cols may be zero.
struct FpMat {
    int l = 3;
    int rows = 0;
    int cols = 0;
    std::vector<int> a;

    FpMat() = default;
    FpMat(int l_, int rows_, int cols_) : l(l_), rows(rows_), cols(cols_), a((size_t)rows_ * cols_, 0) {}
    int& at(int r, int c) { return a[(size_t)r * cols + c]; }
    int at(int r, int c) const { return a[(size_t)r * cols + c]; }
};

int rankFp(FpMat m);

// Solve A x = b. Returns true and writes one solution into x when consistent.
bool solveFp(const FpMat& A, const std::vector<int>& b, std::vector<int>& x);

// Basis of the null space of A, one vector per column of the returned list.
std::vector<std::vector<int>> nullspaceFp(const FpMat& A);

}  // namespace motx
