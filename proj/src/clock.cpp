#include "sigmalab/clock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigmalab/errors.hpp"

namespace sigmalab {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError("clock: " + msg);
}

}  // namespace

SigmaClock::SigmaClock(double horizon, std::vector<Segment> segments, std::vector<Atom> atoms)
    : horizon_(horizon), segments_(std::move(segments)), atoms_(std::move(atoms)) {
    require(std::isfinite(horizon_) && horizon_ > 0.0, "horizon must be positive and finite");
    require(!segments_.empty(), "at least one segment is required");
    require(segments_.front().t0 == 0.0, "first segment must start at 0");
    require(segments_.back().t1 == horizon_, "last segment must end at the horizon");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        require(std::isfinite(s.t0) && std::isfinite(s.t1) && s.t0 < s.t1,
                "segment " + std::to_string(i) + " must have t0 < t1");
        require(std::isfinite(s.w) && s.w >= 0.0,
                "segment " + std::to_string(i) + " has negative or non-finite density");
        if (i > 0)
            require(segments_[i - 1].t1 == s.t0,
                    "segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                        " overlap or leave a gap");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.t < b.t; });
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const auto& a = atoms_[k];
        require(std::isfinite(a.t) && a.t > 0.0 && a.t <= horizon_,
                "atom " + std::to_string(k) + " must lie in (0, T]");
        require(std::isfinite(a.alpha) && a.alpha > 0.0,
                "atom " + std::to_string(k) + " must have positive mass");
        if (k > 0) require(atoms_[k - 1].t < a.t, "two atoms share the same time");
    }

    ac_prefix_.resize(segments_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        ac_prefix_[i] = acc;
        acc += segments_[i].w * (segments_[i].t1 - segments_[i].t0);
    }
    atom_prefix_.resize(atoms_.size());
    acc = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        acc += atoms_[k].alpha;
        atom_prefix_[k] = acc;
    }
}

SigmaClock SigmaClock::identity(double horizon) { return constant(horizon, 1.0); }

SigmaClock SigmaClock::constant(double horizon, double w) {
    return SigmaClock(horizon, {{0.0, horizon, w}});
}

SigmaClock SigmaClock::purely_atomic(double horizon, std::vector<Atom> atoms) {
    return SigmaClock(horizon, {{0.0, horizon, 0.0}}, std::move(atoms));
}

void SigmaClock::check_time(double t) const {
    if (!(t >= 0.0 && t <= horizon_))
        throw DomainError("clock: time " + std::to_string(t) + " outside [0, T]");
}

std::size_t SigmaClock::segment_index(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double x, const Segment& s) { return x < s.t0; });
    return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

double SigmaClock::ac(double t) const {
    check_time(t);
    const std::size_t i = segment_index(t);
    return ac_prefix_[i] + segments_[i].w * (t - segments_[i].t0);
}

double SigmaClock::density(double t) const {
    check_time(t);
    return segments_[segment_index(t)].w;
}

double SigmaClock::sigma(double t) const {
    check_time(t);
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                               [](double x, const Atom& a) { return x < a.t; });
    const auto n = static_cast<std::size_t>(std::distance(atoms_.begin(), it));
    return ac(t) + (n ? atom_prefix_[n - 1] : 0.0);
}

double SigmaClock::sigma_left(double t) const {
    check_time(t);
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                               [](const Atom& a, double x) { return a.t < x; });
    const auto n = static_cast<std::size_t>(std::distance(atoms_.begin(), it));
    return ac(t) + (n ? atom_prefix_[n - 1] : 0.0);
}

double SigmaClock::mass(double s, double t) const {
    if (s > t) throw DomainError("sigma mass: s must not exceed t");
    return sigma(t) - sigma(s);
}

double SigmaClock::atom_mass_at(double t) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                               [](const Atom& a, double x) { return a.t < x; });
    return (it != atoms_.end() && it->t == t) ? it->alpha : 0.0;
}

double SigmaClock::atomic_mass() const { return atom_prefix_.empty() ? 0.0 : atom_prefix_.back(); }

std::vector<double> SigmaClock::breakpoints() const {
    std::vector<double> pts;
    pts.reserve(segments_.size() + 1 + atoms_.size());
    pts.push_back(0.0);
    for (const auto& s : segments_) pts.push_back(s.t1);
    for (const auto& a : atoms_) pts.push_back(a.t);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Decomposition SigmaClock::decompose() const {
    Decomposition d{ac_mass(), atomic_mass(), {}};
    std::vector<FlatInterval> runs;
    for (const auto& s : segments_) {
        if (s.w != 0.0) continue;
        if (!runs.empty() && runs.back().end == s.t0)
            runs.back().end = s.t1;
        else
            runs.push_back({s.t0, s.t1});
    }
    // sigma jumps at an atom, so a flat stops there and a new one starts.
    for (const auto& r : runs) {
        double start = r.start;
        for (const auto& a : atoms_) {
            if (a.t > start && a.t < r.end) {
                d.flats.push_back({start, a.t});
                start = a.t;
            }
        }
        d.flats.push_back({start, r.end});
    }
    return d;
}

bool dominates(const SigmaClock& sigma1, const SigmaClock& sigma2) {
    if (sigma1.horizon() != sigma2.horizon())
        throw DomainError("dominates: clocks have different horizons");
    std::vector<double> grid = sigma1.breakpoints();
    const auto b2 = sigma2.breakpoints();
    grid.insert(grid.end(), b2.begin(), b2.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    auto le = [](double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); };
    for (double t : grid) {
        if (!le(sigma1.sigma(t), sigma2.sigma(t))) return false;
        if (!le(sigma1.sigma_left(t), sigma2.sigma_left(t))) return false;
    }
    return true;
}

double var_sigma(const std::vector<double>& times, const std::vector<double>& values,
                 const SigmaClock& clock) {
    if (times.size() != values.size())
        throw DomainError("var_sigma: times and values differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0 && times[i] <= clock.horizon()))
            throw DomainError("var_sigma: sample time outside [0, T]");
        if (i > 0 && times[i] < times[i - 1])
            throw DomainError("var_sigma: sample times must be nondecreasing");
        if (!std::isfinite(values[i])) throw DomainError("var_sigma: non-finite sample");
    }
    double v = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) v += std::abs(values[i] - values[i - 1]);
    return v;
}

}  // namespace sigmalab
