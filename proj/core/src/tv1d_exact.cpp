#include "specdec/detail/tv1d_exact.hpp"

#include <cstddef>
#include <deque>

namespace specdec::detail {

namespace {

struct Pt {
    std::size_t x;
    double y;
};

inline double slope(const Pt& a, const Pt& b) {
    return (b.y - a.y) / double(b.x - a.x);
}

} // namespace

std::vector<double> tv1d_prox_exact(const std::vector<double>& f, double gamma) {
    const std::size_t n = f.size();
    if (n <= 1 || gamma <= 0.0) return f;

    // Running sums F_0 = 0, F_i = f_0 + ... + f_{i-1}.
    std::vector<double> F(n + 1);
    F[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) F[i + 1] = F[i] + f[i];

    // String values S_0..S_n; the answer is u_i = S_{i+1} - S_i.
    std::vector<double> S(n + 1);
    S[0] = 0.0;

    Pt anchor{0, 0.0};
    // lo: concave chain over the floor F - gamma (slopes decreasing).
    // hi: convex chain under the ceiling F + gamma (slopes increasing).
    std::deque<Pt> lo, hi;

    auto commit = [&](const Pt& v) {
        if (v.x == anchor.x) return;
        const double sl = slope(anchor, v);
        for (std::size_t x = anchor.x + 1; x <= v.x; ++x)
            S[x] = anchor.y + sl * double(x - anchor.x);
        anchor = v;
    };

    auto push_lo = [&](Pt p) {
        while (!lo.empty()) {
            const Pt& b = lo.back();
            const Pt& a = lo.size() >= 2 ? lo[lo.size() - 2] : anchor;
            if (slope(a, b) <= slope(b, p))
                lo.pop_back();
            else
                break;
        }
        lo.push_back(p);
    };

    auto push_hi = [&](Pt p) {
        while (!hi.empty()) {
            const Pt& b = hi.back();
            const Pt& a = hi.size() >= 2 ? hi[hi.size() - 2] : anchor;
            if (slope(a, b) >= slope(b, p))
                hi.pop_back();
            else
                break;
        }
        hi.push_back(p);
    };

    // When the steepest feasible start along the floor exceeds the
    // shallowest along the ceiling, the string is pinned up to the earlier
    // of the two front vertices; fix that segment and continue from it.
    auto resolve = [&]() {
        while (!lo.empty() && !hi.empty()) {
            if (slope(anchor, lo.front()) <= slope(anchor, hi.front())) break;
            if (lo.front().x <= hi.front().x) {
                commit(lo.front());
                lo.pop_front();
                while (hi.size() >= 2 && slope(anchor, hi[0]) >= slope(hi[0], hi[1]))
                    hi.pop_front();
            } else {
                commit(hi.front());
                hi.pop_front();
                while (lo.size() >= 2 && slope(anchor, lo[0]) <= slope(lo[0], lo[1]))
                    lo.pop_front();
            }
        }
    };

    for (std::size_t i = 1; i <= n; ++i) {
        const double off = i < n ? gamma : 0.0;  // both ends pinned
        push_lo(Pt{i, F[i] - off});
        push_hi(Pt{i, F[i] + off});
        resolve();
    }
    commit(Pt{n, F[n]});

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = S[i + 1] - S[i];
    return u;
}

} // namespace specdec::detail
