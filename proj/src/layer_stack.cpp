#include "qdcav/layer_stack.hpp"

#include "qdcav/units.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qdcav::stack {

using units::kPi;
using cplx = std::complex<double>;

void LayerStack::validate() const
{
    if (!(ambient_index >= 1.0) || !(substrate_index >= 1.0)) {
        throw std::invalid_argument("ambient and substrate indices must be >= 1");
    }
    for (const auto& l : layers) {
        if (!(l.index >= 1.0)) throw std::invalid_argument("layer index must be >= 1");
        if (!(l.thickness > 0.0)) throw std::invalid_argument("layer thickness must be positive");
    }
}

LayerStack quarter_wave_dbr(std::size_t pairs, double n_high, double n_low, double design_lambda,
                            double ambient_index, double substrate_index)
{
    if (!(design_lambda > 0.0)) throw std::invalid_argument("design wavelength must be positive");
    LayerStack s;
    s.ambient_index = ambient_index;
    s.substrate_index = substrate_index;
    for (std::size_t i = 0; i < pairs; ++i) {
        s.layers.push_back({n_high, design_lambda / (4.0 * n_high)});
        s.layers.push_back({n_low, design_lambda / (4.0 * n_low)});
    }
    s.validate();
    return s;
}

cplx stack_reflectance(const LayerStack& stack, double lambda)
{
    stack.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("wavelength must be positive");
    // Characteristic matrix of each layer: [[cos δ, i sin δ / n], [i n sin δ, cos δ]].
    // [B, C]ᵀ = Π M_j · [1, n_s]ᵀ, with the product taken from the substrate up.
    cplx b = 1.0;
    cplx c = stack.substrate_index;
    for (auto it = stack.layers.rbegin(); it != stack.layers.rend(); ++it) {
        const double phase = 2.0 * kPi * it->index * it->thickness / lambda;
        const double cs = std::cos(phase), sn = std::sin(phase);
        const cplx i(0.0, 1.0);
        const cplx nb = cs * b + i * (sn / it->index) * c;
        const cplx nc = i * (it->index * sn) * b + cs * c;
        b = nb;
        c = nc;
    }
    const double na = stack.ambient_index;
    return (na * b - c) / (na * b + c);
}

namespace {

double wrap_phase(double theta)
{
    double w = std::remainder(theta, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

}  // namespace

double round_trip_phase(cplx r, double spacing, double lambda)
{
    return wrap_phase(4.0 * kPi * spacing / lambda + (std::abs(r) > 0.0 ? std::arg(r) : 0.0));
}

namespace {

void check_interference_args(cplx r, double spacing, double lambda)
{
    if (!(std::abs(r) <= 1.0 + 1e-12)) throw std::invalid_argument("|r| must not exceed 1");
    if (!(spacing >= 0.0)) throw std::invalid_argument("spacing must be non-negative");
    if (!(lambda > 0.0)) throw std::invalid_argument("wavelength must be positive");
}

struct TwoBeam {
    double up;
    double down;
};

TwoBeam two_beam(cplx r, double spacing, double lambda)
{
    check_interference_args(r, spacing, lambda);
    const double m = std::min(std::abs(r), 1.0);
    const double theta = round_trip_phase(r, spacing, lambda);
    const double up = std::norm(1.0 + m * std::polar(1.0, theta));
    const double down = 1.0 - m * m;
    if (up + down == 0.0) return {1.0, 0.0};
    return {up / (up + down), down / (up + down)};
}


}  // namespace

double upward_fraction(cplx r, double spacing, double lambda) { return two_beam(r, spacing, lambda).up; }

double downward_fraction(cplx r, double spacing, double lambda) { return two_beam(r, spacing, lambda).down; }

InterferenceResult evaluate_spacing(cplx r, double spacing, double lambda)
{
    InterferenceResult res;
    res.r = r;
    res.big_r = std::norm(r);
    res.spacing = spacing;
    res.f_up = upward_fraction(r, spacing, lambda);
    res.theta = round_trip_phase(r, spacing, lambda);
    return res;
}

std::vector<SweepPoint> sweep_spacing(cplx r, double lambda, double d_min, double d_max, std::size_t points)
{
    if (!(d_min >= 0.0) || !(d_max > d_min)) throw std::invalid_argument("spacing range is empty");
    if (points < 2) throw std::invalid_argument("sweep needs at least two points");
    std::vector<SweepPoint> sweep(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double d = d_min + (d_max - d_min) * static_cast<double>(i) / static_cast<double>(points - 1);
        sweep[i] = {d, upward_fraction(r, d, lambda)};
    }
    return sweep;
}

InterferenceResult optimize_spacing(const LayerStack& stack, double lambda, double d_min, double d_max,
                                    std::size_t scan_points)
{
    if (!(d_min >= 0.0) || !(d_max > d_min)) throw std::invalid_argument("spacing range is empty");
    if (scan_points < 1000) throw std::invalid_argument("spacing scan needs at least 1000 points");
    const cplx r = stack_reflectance(stack, lambda);
    const auto scan = sweep_spacing(r, lambda, d_min, d_max, scan_points);
    auto f = [&](double d) { return upward_fraction(r, d, lambda); };

    constexpr double kTie = 1e-12;
    std::optional<InterferenceResult> best;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const bool left_ok = i == 0 || scan[i].f_up >= scan[i - 1].f_up;
        const bool right_ok = i + 1 == scan.size() || scan[i].f_up >= scan[i + 1].f_up;
        if (!left_ok || !right_ok) continue;
        double a = scan[i == 0 ? 0 : i - 1].spacing;
        double b = scan[i + 1 == scan.size() ? i : i + 1].spacing;
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
        double f1 = f(x1), f2 = f(x2);
        while (b - a > 1e-10 * std::max(1.0, lambda)) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2; x2 = a + kInvPhi * (b - a); f2 = f(x2);
            } else {
                b = x2; x2 = x1; f2 = f1; x1 = b - kInvPhi * (b - a); f1 = f(x1);
            }
        }
        double d = 0.5 * (a + b);
        if (f(scan[i].spacing) >= f(d)) d = scan[i].spacing;
        const InterferenceResult cand = evaluate_spacing(r, d, lambda);
        if (!best || cand.f_up > best->f_up + kTie) best = cand;
    }
    return *best;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& sweep)
{
    os << "spacing_nm,f_up\n";
    for (const auto& p : sweep) os << fmt::format("{:.17g},{:.17g}\n", p.spacing, p.f_up);
}

void write_stack(std::ostream& os, const LayerStack& stack)
{
    stack.validate();
    os << fmt::format("ambient {:.17g}\n", stack.ambient_index);
    os << fmt::format("substrate {:.17g}\n", stack.substrate_index);
    for (const auto& l : stack.layers) os << fmt::format("{:.17g} {:.17g}\n", l.index, l.thickness);
}

LayerStack read_stack(std::istream& is)
{
    LayerStack s;
    bool have_ambient = false, have_substrate = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        auto fail = [&](const std::string& what) {
            return std::invalid_argument(fmt::format("stack line {}: {}", line_no, what));
        };
        double value = 0.0;
        if (first == "ambient" || first == "substrate") {
            if (!(ls >> value)) throw fail("missing index");
            (first == "ambient" ? s.ambient_index : s.substrate_index) = value;
            (first == "ambient" ? have_ambient : have_substrate) = true;
        } else {
            Layer l;
            try {
                l.index = std::stod(first);
            } catch (const std::exception&) {
                throw fail("expected 'index thickness_nm'");
            }
            if (!(ls >> l.thickness)) throw fail("missing thickness");
            s.layers.push_back(l);
        }
        std::string extra;
        if (ls >> extra) throw fail("unexpected trailing text");
    }
    if (!have_ambient || !have_substrate) throw std::invalid_argument("stack file needs ambient and substrate lines");
    s.validate();
    return s;
}

LayerStack load_stack(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open stack file " + path.string());
    return read_stack(is);
}

}  // namespace qdcav::stack
