#include "catlab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "catlab/error.hpp"

namespace catlab {

namespace {

void require_basis(const spectral::SpectralBasis* basis, const Grid& grid, const char* what) {
    if (basis == nullptr) throw DomainError(std::string(what) + " needs the spectral basis");
    if (!(basis->grid == grid)) throw DomainError(std::string(what) + ": basis grid differs");
}

}  // namespace

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open table " + path);
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0, c = 0.0;
        if (!(ss >> a >> b)) {
            if (t.y.empty()) continue;  // header
            throw DomainError("malformed row in " + path + ": " + line);
        }
        t.y.push_back(a);
        t.first.push_back(b);
        if (ss >> c) t.second.push_back(c);
    }
    if (t.y.size() < 2) throw DomainError("table " + path + " needs at least two rows");
    if (!t.second.empty() && t.second.size() != t.y.size())
        throw DomainError("table " + path + " has ragged columns");
    for (std::size_t i = 1; i < t.y.size(); ++i)
        if (!(t.y[i] > t.y[i - 1])) throw DomainError("table " + path + ": y must increase");
    return t;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& v, double at) {
    if (at < x.front() || at > x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    if (it == x.end()) return v.back();
    const std::size_t k = static_cast<std::size_t>(it - x.begin());
    const double s = (at - x[k - 1]) / (x[k] - x[k - 1]);
    return (1.0 - s) * v[k - 1] + s * v[k];
}

std::vector<double> profile_samples(const ProfileSpec& spec, const Grid& grid,
                                    const spectral::SpectralBasis* basis) {
    std::vector<double> out(grid.size(), 0.0);
    const double amp = spec.amplitude;
    const double w = spec.width;
    if (spec.preset == "zero") {
    } else if (spec.preset == "gd") {
        require_basis(basis, grid, "preset gd");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = amp * basis->g_d[i];
    } else if (spec.preset == "gaussian") {
        if (!(w > 0.0)) throw DomainError("gaussian width must be positive");
        out = grid.sample([&](double y) { return amp * std::exp(-y * y / (w * w)); });
    } else if (spec.preset == "collar") {
        if (!(w > 0.0)) throw DomainError("collar width must be positive");
        out = grid.sample([&](double y) {
            const double s = y / w;
            if (s >= 1.0) return 0.0;
            const double q = 1.0 - s * s;
            return amp * q * q * q * q;
        });
    } else if (spec.preset == "file") {
        const Table t = read_table(spec.file);
        out = grid.sample([&](double y) { return interpolate(t.y, t.first, y); });
        if (amp != 0.0)
            for (auto& v : out) v *= amp;
    } else {
        throw DomainError("unknown data preset '" + spec.preset + "'");
    }
    if (spec.project) {
        require_basis(basis, grid, "P_c projection");
        out = spectral::project_c(out, *basis);
    }
    return out;
}

FieldState initial_data(const DataSpec& spec, const Grid& grid,
                        const spectral::SpectralBasis* basis, double margin) {
    FieldState s;
    s.t = 0.0;
    s.representation = Representation::Weighted;
    s.parity = Parity::Even;
    s.phi = profile_samples(spec.position, grid, basis);
    s.pi = profile_samples(spec.velocity, grid, basis);
    if (spec.position.preset == "file" && spec.velocity.preset == "zero") {
        const Table t = read_table(spec.position.file);
        if (!t.second.empty()) {
            s.pi = grid.sample([&](double y) { return interpolate(t.y, t.second, y); });
            if (spec.position.project) s.pi = spectral::project_c(s.pi, *basis);
        }
    }
    if (spec.a != 0.0) {
        require_basis(basis, grid, "amplitude a");
        for (std::size_t i = 0; i < s.phi.size(); ++i) s.phi[i] += spec.a * basis->g_d[i];
    }
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
        const double y = grid.node(i);
        const double jb = japanese(y);
        const double phys = s.phi[i] / std::sqrt(jb);
        if (!std::isfinite(phys) || !(std::abs(phys) < (1.0 - margin) * jb * jb)) {
            std::ostringstream msg;
            msg << "initial data leaves the graph chart at y=" << y << " (phi=" << phys << ")";
            throw RegularityViolation(y, phys, msg.str());
        }
    }
    return s;
}

}  // namespace catlab
