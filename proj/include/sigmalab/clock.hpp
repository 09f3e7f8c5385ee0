#pragma once

#include <vector>

namespace sigmalab {

struct Segment {
    double t0;
    double t1;
    double w;  // constant density on [t0, t1)
};

struct Atom {
    double t;
    double alpha;  // strictly positive mass
};

struct FlatInterval {
    double start;
    double end;
};

struct Decomposition {
    double ac_mass;
    double atomic_mass;
    std::vector<FlatInterval> flats;
};

/// Nondecreasing right-continuous clock sigma on [0, T]:
/// piecewise-constant density plus a finite list of atoms.
/// sigma(t) counts atoms with t_k <= t; sigma_left(t) excludes an atom sitting at t.
class SigmaClock {
public:
    SigmaClock(double horizon, std::vector<Segment> segments, std::vector<Atom> atoms = {});

    static SigmaClock identity(double horizon);
    static SigmaClock constant(double horizon, double w);
    static SigmaClock purely_atomic(double horizon, std::vector<Atom> atoms);

    double horizon() const { return horizon_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    double operator()(double t) const { return sigma(t); }
    double sigma(double t) const;
    double sigma_left(double t) const;
    /// Mass of (s, t]: atoms at s excluded, at t included.
    double mass(double s, double t) const;
    double ac(double t) const;  // absolutely continuous part only
    double density(double t) const;  // w on the segment containing t (right-continuous)
    double atom_mass_at(double t) const;  // 0 when no atom sits exactly at t

    double ac_mass() const { return ac(horizon_); }
    double atomic_mass() const;
    double total_mass() const { return sigma(horizon_); }

    /// Sorted union of segment endpoints and atom times.
    std::vector<double> breakpoints() const;

    Decomposition decompose() const;

private:
    void check_time(double t) const;
    std::size_t segment_index(double t) const;

    double horizon_;
    std::vector<Segment> segments_;
    std::vector<Atom> atoms_;
    std::vector<double> ac_prefix_;    // ac mass at each segment start
    std::vector<double> atom_prefix_;  // atom mass up to and including atom k
};

/// True when sigma1(t) <= sigma2(t) on [0, T], checked on both sides of every breakpoint.
bool dominates(const SigmaClock& sigma1, const SigmaClock& sigma2);

/// Total variation of a sampled scalar path along a nondecreasing time grid in [0, T].
/// Repeated times (pre/post atom samples) are allowed.
double var_sigma(const std::vector<double>& times, const std::vector<double>& values,
                 const SigmaClock& clock);

}  // namespace sigmalab
