#ifndef PREDLAB_ARCSET_HPP
#define PREDLAB_ARCSET_HPP

/** @file
 * Finite unions of closed arcs of the unit circle and their transfinite
 * diameters where a closed form is known.
 *
 * Angles are in radians. An arc is stored by its center, normalized into
 * (-pi, pi], and its length in [0, 2pi]; a zero-length arc is a single point.
 */

#include <optional>
#include <utility>
#include <vector>

namespace predlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Angles agreeing within this are treated as equal by the pattern matcher.
inline constexpr double kArcTolerance = 1e-12 * kTwoPi;

/// Maps an angle into (-pi, pi].
double normalize_angle(double theta);

struct Arc {
    double center = 0.0;
    double length = 0.0;

    /// Arc {e^{i theta}: |theta - center| <= length/2}.
    static Arc centered(double center, double length);
    /// Arc from lo to hi counterclockwise; hi is unwrapped relative to lo.
    static Arc from_endpoints(double lo, double hi);

    [[nodiscard]] double lo() const { return center - 0.5 * length; }
    [[nodiscard]] double hi() const { return center + 0.5 * length; }
};

/// Closed interval of angles [lo, hi] with lo in (-pi, pi] and hi = lo + length.
struct AngleInterval {
    double lo;
    double hi;
    [[nodiscard]] double length() const { return hi - lo; }
};

class ArcSet {
public:
    /// The empty set.
    ArcSet() = default;

    /// Normalizes, sorts by left endpoint and merges overlapping or abutting arcs.
    explicit ArcSet(std::vector<Arc> arcs);

    static ArcSet full_circle();

    [[nodiscard]] bool is_full_circle() const { return full_; }
    [[nodiscard]] bool empty() const { return !full_ && intervals_.empty(); }
    [[nodiscard]] std::size_t size() const { return full_ ? 1 : intervals_.size(); }
    [[nodiscard]] double total_length() const;

    /// Component arcs; the full circle reports one arc of length 2pi centered at 0.
    [[nodiscard]] std::vector<Arc> arcs() const;
    /// Components as angle intervals sorted by lo; the full circle is [-pi, pi].
    [[nodiscard]] std::vector<AngleInterval> intervals() const;

    [[nodiscard]] bool contains(double theta, double tol = 0.0) const;
    [[nodiscard]] ArcSet intersect(const ArcSet& other) const;
    /// Image under complex conjugation (theta -> -theta).
    [[nodiscard]] ArcSet conjugate() const;
    /// True when both sets have the same components within tol.
    [[nodiscard]] bool approx_equal(const ArcSet& other, double tol = kArcTolerance) const;

private:
    bool full_ = false;
    std::vector<AngleInterval> intervals_;
};

struct Segment {
    double lo;
    double hi;
};

/// Disjoint closed subintervals of [-1, 1], sorted.
class RealSegmentSet {
public:
    RealSegmentSet() = default;
    explicit RealSegmentSet(std::vector<Segment> segments);
    [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<Segment> segments_;
};

// Constructors for the standard configurations.

/// Gamma_beta(theta0): one arc of length beta centered at theta0.
ArcSet gamma_arc(double beta, double theta0 = 0.0);
/// Gamma(k): k equidistant arcs of length alpha, the first centered at theta0.
ArcSet equidistant_arcs(int k, double alpha, double theta0 = 0.0);
/// Gamma_{alpha,delta}(theta0): two arcs of length alpha separated by 2 delta around theta0.
ArcSet symmetric_pair(double alpha, double delta, double theta0 = 0.0);
/// Delta_{alpha,delta}(theta0): Gamma_{alpha,delta} together with its mirror image in the y-axis.
ArcSet four_arc(double alpha, double delta, double theta0 = 0.0);

/**
 * Exact transfinite diameter when F matches, up to rotation, one of: the full
 * circle, a single arc, a set with k-fold rotational symmetry whose image
 * under z^k resolves (k equidistant equal arcs, the four-arc pattern), or two
 * equal arcs. Returns nullopt when nothing matches.
 */
std::optional<double> closed_form_tau(const ArcSet& F);

/// (b - a)/4 for a single segment; throws MultiSegment for more than one.
double segment_tau(const RealSegmentSet& S);

ArcSet rotate(const ArcSet& F, double theta);

/// {cos theta : e^{i theta} in F}; throws NotSymmetric unless F equals its conjugate.
RealSegmentSet project_real(const ArcSet& F);

/// {z : z^k in F}.
ArcSet preimage_power(const ArcSet& F, int k);

}  // namespace predlab

#endif
