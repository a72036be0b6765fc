#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bellforge/thermal.hpp"
#include "bellforge/types.hpp"

namespace bellforge {

namespace {

void add_ring(SpinLattice& lat, int n, double J, double Jq = 0.0,
              const Eigen::Vector3d& axes = Eigen::Vector3d::Ones())
{
    if (n < 2) throw DomainError("a ring needs at least two sites");
    // two sites share a single bond
    const int bonds = n == 2 ? 1 : n;
    for (int i = 0; i < bonds; ++i) lat.edges.push_back({i, (i + 1) % n, J, Jq, axes});
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

} // namespace

SpinLattice xxx_ring(int n, double J, double l)
{
    SpinLattice lat;
    lat.spins.assign(n, l);
    lat.convention = l == 0.5 ? OperatorConvention::pauli : OperatorConvention::spin;
    add_ring(lat, n, J);
    lat.name = "xxx_ring";
    lat.validate();
    return lat;
}

SpinLattice xxz_ring(int n, double J, double J3, double B)
{
    SpinLattice lat;
    lat.spins.assign(n, 0.5);
    lat.convention = OperatorConvention::pauli;
    add_ring(lat, n, 1.0, 0.0, Eigen::Vector3d(J, J, J3));
    lat.field = Eigen::Vector3d(0, 0, B);
    lat.name = "xxz_ring";
    lat.validate();
    return lat;
}

SpinLattice ising_ring(int n, int sign, double B)
{
    if (sign != 1 && sign != -1) throw DomainError("ising_ring: sign must be +1 or -1");
    SpinLattice lat;
    lat.spins.assign(n, 0.5);
    lat.convention = OperatorConvention::pauli;
    add_ring(lat, n, sign, 0.0, Eigen::Vector3d(0, 0, 1));
    lat.field = Eigen::Vector3d(B, 0, 0);
    lat.name = "ising_ring";
    lat.validate();
    return lat;
}

SpinLattice blbq_ring6(double a)
{
    SpinLattice lat;
    lat.spins.assign(6, 1.0);
    add_ring(lat, 6, std::cos(a), std::sin(a));
    lat.name = "blbq_ring6";
    lat.validate();
    return lat;
}

SpinLattice cube_center(double a)
{
    SpinLattice lat;
    lat.spins.assign(9, 0.5);
    const double c = std::cos(a), s = std::sin(a);
    const int cube[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                             {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};
    for (const auto& e : cube) lat.edges.push_back({e[0], e[1], c, 0.0});
    for (int i = 0; i < 8; ++i) lat.edges.push_back({8, i, s, 0.0});
    lat.name = "cube_center";
    lat.validate();
    return lat;
}

SpinLattice octahedron_center(double a)
{
    SpinLattice lat;
    lat.spins = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0};
    const double c = std::cos(a), s = std::sin(a);
    // poles 0 and 5 touch the equator 1..4; the equator is a square
    for (int pole : {0, 5})
        for (int i = 1; i <= 4; ++i) lat.edges.push_back({pole, i, c, 0.0});
    lat.edges.push_back({1, 4, c, 0.0});
    for (int i = 1; i <= 3; ++i) lat.edges.push_back({i, i + 1, c, 0.0});
    for (int i = 0; i < 6; ++i) lat.edges.push_back({6, i, s, 0.0});
    lat.name = "octahedron_center";
    lat.validate();
    return lat;
}

SpinLattice tetrahedron_center(double a)
{
    SpinLattice lat;
    lat.spins = {0.5, 0.5, 0.5, 0.5, 1.0};
    const double c = std::cos(a), s = std::sin(a);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) lat.edges.push_back({i, j, c, 0.0});
    for (int i = 0; i < 4; ++i) lat.edges.push_back({4, i, s, 0.0});
    lat.name = "tetrahedron_center";
    lat.validate();
    return lat;
}

SpinLattice dimer_chain(int n, double J1, double J2)
{
    if (n < 2) throw DomainError("dimer_chain needs at least two sites");
    SpinLattice lat;
    lat.spins.assign(n, 0.5);
    for (int i = 0; i + 1 < n; ++i) {
        const double J = i % 2 == 0 ? J1 : J2;
        if (J != 0.0) lat.edges.push_back({i, i + 1, J, 0.0});
    }
    lat.name = "dimer_chain";
    lat.validate();
    return lat;
}

SpinLattice xxx_chain(int n, double J)
{
    if (n < 2) throw DomainError("xxx_chain needs at least two sites");
    SpinLattice lat;
    lat.spins.assign(n, 0.5);
    lat.convention = OperatorConvention::pauli;
    for (int i = 0; i + 1 < n; ++i) lat.edges.push_back({i, i + 1, J, 0.0});
    lat.name = "xxx_chain";
    lat.validate();
    return lat;
}

SpinLattice model_by_name(const std::string& spec, double a)
{
    const auto parts = split(spec, ':');
    if (parts.empty()) throw DomainError("empty model name");
    auto num = [&](std::size_t i, double fallback) {
        if (i >= parts.size() || parts[i].empty()) return fallback;
        try {
            return std::stod(parts[i]);
        } catch (const std::exception&) {
            throw DomainError("bad model parameter '" + parts[i] + "'");
        }
    };
    const std::string& name = parts[0];
    if (name == "xxx_ring") return xxx_ring(static_cast<int>(num(1, 8)), num(2, 1.0), num(3, 0.5));
    if (name == "xxz_ring") return xxz_ring(static_cast<int>(num(1, 8)), num(2, 1.0), num(3, 1.0), num(4, 0.0));
    if (name == "ising_ring") return ising_ring(static_cast<int>(num(1, 8)), static_cast<int>(num(2, 1)), num(3, 0.0));
    if (name == "blbq_ring6") return blbq_ring6(a);
    if (name == "cube_center") return cube_center(a);
    if (name == "octahedron_center") return octahedron_center(a);
    if (name == "tetrahedron_center") return tetrahedron_center(a);
    if (name == "dimer_chain") return dimer_chain(static_cast<int>(num(1, 2)), num(2, 1.0), num(3, 0.0));
    if (name == "xxx_chain") return xxx_chain(static_cast<int>(num(1, 5)), num(2, 1.0));
    throw DomainError("unknown model '" + name + "'");
}

SpinLattice lattice_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("lattice JSON: ") + e.what());
    }
    try {
        SpinLattice lat;
        lat.spins = j.at("sites").get<std::vector<double>>();
        const auto& edges = j.at("edges");
        for (const auto& e : edges) {
            if (e.size() < 3 || e.size() > 4) throw DomainError("lattice JSON: edges are [i, j, J] or [i, j, J, Jq]");
            Edge edge{e[0].get<int>(), e[1].get<int>(), e[2].get<double>(), e.size() == 4 ? e[3].get<double>() : 0.0};
            lat.edges.push_back(edge);
        }
        if (j.contains("field")) {
            const auto f = j.at("field").get<std::vector<double>>();
            if (f.size() != 3) throw DomainError("lattice JSON: field has three components");
            lat.field = Eigen::Vector3d(f[0], f[1], f[2]);
        }
        if (j.contains("anisotropy")) {
            const auto& an = j.at("anisotropy");
            if (an.size() != lat.edges.size()) throw DomainError("lattice JSON: one anisotropy triple per edge");
            for (std::size_t k = 0; k < an.size(); ++k) {
                const auto w = an[k].get<std::vector<double>>();
                if (w.size() != 3) throw DomainError("lattice JSON: anisotropy triples have three weights");
                lat.edges[k].axes = Eigen::Vector3d(w[0], w[1], w[2]);
            }
        }
        const std::string conv = j.value("convention", std::string("spin"));
        if (conv == "pauli") lat.convention = OperatorConvention::pauli;
        else if (conv == "spin") lat.convention = OperatorConvention::spin;
        else throw DomainError("lattice JSON: convention must be 'pauli' or 'spin'");
        lat.name = j.value("name", std::string("custom"));
        lat.validate();
        return lat;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("lattice JSON: ") + e.what());
    }
}

} // namespace bellforge
