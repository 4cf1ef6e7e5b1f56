#include "specdec/transforms.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "specdec/detail/rng.hpp"
#include "specdec/errors.hpp"

namespace specdec {

namespace {

class IdentityTransform final : public Transform {
public:
    std::string name() const override { return "identity"; }

    std::vector<double> forward(const Signal& u) const override { return u.values(); }

    Signal inverse(const std::vector<double>& z, const Signal& like) const override {
        if (z.size() != like.size())
            throw ParameterError("identity transform: coefficient count mismatch");
        Signal out = like;
        out.values() = z;
        return out;
    }
};

// Row k of the orthonormal DCT-II matrix of size n:
//   C[k][i] = c_k cos(pi (2i+1) k / (2n)),  c_0 = sqrt(1/n), c_k = sqrt(2/n).
const std::vector<double>& dct_matrix(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> c(n * n);
    const double pi = 3.14159265358979323846264338327950288;
    for (std::size_t k = 0; k < n; ++k) {
        const double ck = std::sqrt((k == 0 ? 1.0 : 2.0) / double(n));
        for (std::size_t i = 0; i < n; ++i)
            c[k * n + i] = ck * std::cos(pi * (2.0 * double(i) + 1.0) * double(k) /
                                         (2.0 * double(n)));
    }
    return cache.emplace(n, std::move(c)).first->second;
}

void dct_rows(const std::vector<double>& x, std::vector<double>& out, std::size_t rows,
              std::size_t cols, bool transpose_matrix) {
    const std::vector<double>& c = dct_matrix(cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < cols; ++k) {
            double acc = 0.0;
            if (!transpose_matrix) {
                for (std::size_t i = 0; i < cols; ++i) acc += c[k * cols + i] * x[r * cols + i];
            } else {
                for (std::size_t i = 0; i < cols; ++i) acc += c[i * cols + k] * x[r * cols + i];
            }
            out[r * cols + k] = acc;
        }
    }
}

void transpose(const std::vector<double>& x, std::vector<double>& out, std::size_t rows,
               std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out[j * rows + i] = x[i * cols + j];
}

class DctTransform final : public Transform {
public:
    std::string name() const override { return "dct"; }

    std::vector<double> forward(const Signal& u) const override {
        return apply(u.values(), u.rows(), u.cols(), false);
    }

    Signal inverse(const std::vector<double>& z, const Signal& like) const override {
        if (z.size() != like.size())
            throw ParameterError("dct transform: coefficient count mismatch");
        Signal out = like;
        out.values() = apply(z, like.rows(), like.cols(), true);
        return out;
    }

private:
    static std::vector<double> apply(const std::vector<double>& x, std::size_t rows,
                                     std::size_t cols, bool inverse) {
        std::vector<double> a(x.size()), b(x.size());
        dct_rows(x, a, rows, cols, inverse);
        if (rows == 1) return a;
        transpose(a, b, rows, cols);
        dct_rows(b, a, cols, rows, inverse);
        transpose(a, b, cols, rows);
        return b;
    }
};

} // namespace

std::shared_ptr<const Transform> identity_transform() {
    static auto t = std::make_shared<const IdentityTransform>();
    return t;
}

std::shared_ptr<const Transform> dct_transform() {
    static auto t = std::make_shared<const DctTransform>();
    return t;
}

double orthonormality_defect(const Transform& V, const Signal& like, std::uint64_t seed,
                             int probes) {
    detail::Rng rng(seed);
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        Signal u = Signal::zeros_like(like);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
        double nu = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) nu += u[i] * u[i];
        nu = std::sqrt(nu);
        if (nu == 0.0) continue;

        const std::vector<double> z = V.forward(u);
        double nz = 0.0;
        for (double v : z) nz += v * v;
        nz = std::sqrt(nz);
        worst = std::max(worst, std::abs(nz / nu - 1.0));

        const Signal back = V.inverse(z, u);
        double dr = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            dr += (back[i] - u[i]) * (back[i] - u[i]);
        worst = std::max(worst, std::sqrt(dr) / nu);
    }
    return worst;
}

} // namespace specdec
