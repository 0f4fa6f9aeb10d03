#pragma once

// Text serialization of MixedDistribution:
//   L N n_atoms
//   N density values (or none for a purely atomic measure)
//   n_atoms lines "location weight"
// Numbers are written with 17 significant digits.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rosenau/spectral.hpp"

namespace rosenau {

inline void write_mixed_distribution(std::ostream& out, const MixedDistribution& d) {
    d.validate();
    out << std::setprecision(17);
    out << d.grid.length() << ' ' << d.grid.points() << ' ' << d.atoms.size() << '\n';
    for (double x : d.density)
        out << x << '\n';
    for (const Atom& a : d.atoms)
        out << a.location << ' ' << a.weight << '\n';
}

inline void write_mixed_distribution(const std::string& path, const MixedDistribution& d) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write '" + path + "'");
    write_mixed_distribution(out, d);
}

inline MixedDistribution read_mixed_distribution(std::istream& in, const std::string& source = "<stream>") {
    double length = 0.0;
    long long points = 0, n_atoms = 0;
    if (!(in >> length >> points >> n_atoms) || points <= 0 || n_atoms < 0)
        throw std::invalid_argument(source + ": bad header, expected 'L N n_atoms'");
    std::vector<double> numbers;
    double x;
    while (in >> x)
        numbers.push_back(x);
    if (!in.eof())
        throw std::invalid_argument(source + ": non-numeric token after value " + std::to_string(numbers.size()));
    const std::size_t atom_values = 2 * static_cast<std::size_t>(n_atoms);
    if (numbers.size() < atom_values)
        throw std::invalid_argument(source + ": expected " + std::to_string(n_atoms) + " atoms");
    const std::size_t n_density = numbers.size() - atom_values;
    if (n_density != 0 && n_density != static_cast<std::size_t>(points))
        throw std::invalid_argument(source + ": expected " + std::to_string(points) + " or 0 density values, got " +
                                    std::to_string(n_density));
    MixedDistribution d;
    d.grid = GridSpec(length, static_cast<std::size_t>(points));
    d.density.assign(numbers.begin(), numbers.begin() + static_cast<std::ptrdiff_t>(n_density));
    for (std::size_t i = n_density; i < numbers.size(); i += 2)
        d.atoms.push_back({numbers[i], numbers[i + 1]});
    d.validate();
    return d;
}

inline MixedDistribution read_mixed_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open distribution file '" + path + "'");
    return read_mixed_distribution(in, path);
}

/// Moves a distribution onto another grid: density by linear interpolation
/// (zero outside the source domain), rescaled to keep its mass; atoms as is.
inline MixedDistribution regrid(const MixedDistribution& d, const GridSpec& target) {
    MixedDistribution out;
    out.grid = target;
    out.atoms = d.atoms;
    if (d.has_density()) {
        const GridSpec& src = d.grid;
        const std::size_t n = src.points();
        out.density.assign(target.points(), 0.0);
        for (std::size_t j = 0; j < target.points(); ++j) {
            const double u = (target.v(j) - src.v(0)) / src.dv();
            if (u < 0.0 || u > static_cast<double>(n - 1))
                continue;
            const auto i = static_cast<std::size_t>(std::floor(u));
            const double f = u - static_cast<double>(i);
            const double right = i + 1 < n ? d.density[i + 1] : 0.0;
            out.density[j] = (1.0 - f) * d.density[i] + f * right;
        }
        const double before = d.density_mass(), after = out.density_mass();
        if (after != 0.0 && before != 0.0)
            for (double& x : out.density)
                x *= before / after;
    }
    out.validate();
    return out;
}

} // namespace rosenau
