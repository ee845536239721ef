#include "predlab/arcset.hpp"

#include "predlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace predlab {

double normalize_angle(double theta)
{
    double r = std::fmod(theta + kPi, kTwoPi);
    if (r <= 0.0) r += kTwoPi;
    return r - kPi;
}

Arc Arc::centered(double center, double length)
{
    if (!(length >= 0.0) || length > kTwoPi + kArcTolerance)
        throw InvalidArgument("arc length must lie in [0, 2pi]");
    return {normalize_angle(center), std::min(length, kTwoPi)};
}

Arc Arc::from_endpoints(double lo, double hi)
{
    return centered(0.5 * (lo + hi), hi - lo);
}

ArcSet::ArcSet(std::vector<Arc> arcs)
{
    std::vector<AngleInterval> iv;
    iv.reserve(arcs.size());
    for (const Arc& a : arcs) {
        if (!(a.length >= 0.0)) throw InvalidArgument("arc length must be nonnegative");
        if (a.length >= kTwoPi - kArcTolerance) {
            full_ = true;
            return;
        }
        const double lo = normalize_angle(a.center - 0.5 * a.length);
        iv.push_back({lo, lo + a.length});
    }
    std::sort(iv.begin(), iv.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });

    std::vector<AngleInterval> merged;
    for (const auto& x : iv) {
        if (!merged.empty() && x.lo <= merged.back().hi + kArcTolerance)
            merged.back().hi = std::max(merged.back().hi, x.hi);
        else
            merged.push_back(x);
    }
    // Wrap-around: the last interval may reach past pi into the first ones.
    while (merged.size() > 1 && merged.back().hi + kArcTolerance >= merged.front().lo + kTwoPi) {
        merged.back().hi = std::max(merged.back().hi, merged.front().hi + kTwoPi);
        merged.erase(merged.begin());
    }
    if (merged.size() == 1 && merged.front().length() >= kTwoPi - kArcTolerance) {
        full_ = true;
        return;
    }
    // Keep the left endpoints sorted: a merged wrap interval may now start last.
    std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    intervals_ = std::move(merged);
}

ArcSet ArcSet::full_circle()
{
    ArcSet s;
    s.full_ = true;
    return s;
}

double ArcSet::total_length() const
{
    if (full_) return kTwoPi;
    double sum = 0.0;
    for (const auto& x : intervals_) sum += x.length();
    return sum;
}

std::vector<Arc> ArcSet::arcs() const
{
    if (full_) return {Arc{0.0, kTwoPi}};
    std::vector<Arc> out;
    out.reserve(intervals_.size());
    for (const auto& x : intervals_) out.push_back(Arc::from_endpoints(x.lo, x.hi));
    return out;
}

std::vector<AngleInterval> ArcSet::intervals() const
{
    if (full_) return {{-kPi, kPi}};
    return intervals_;
}

bool ArcSet::contains(double theta, double tol) const
{
    if (full_) return true;
    const double t = normalize_angle(theta);
    for (const auto& x : intervals_) {
        for (double shift : {0.0, kTwoPi}) {
            if (t + shift >= x.lo - tol && t + shift <= x.hi + tol) return true;
        }
    }
    return false;
}

ArcSet ArcSet::intersect(const ArcSet& other) const
{
    if (full_) return other;
    if (other.full_) return *this;
    std::vector<Arc> pieces;
    for (const auto& a : intervals_) {
        for (const auto& b : other.intervals_) {
            for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
                const double lo = std::max(a.lo, b.lo + shift);
                const double hi = std::min(a.hi, b.hi + shift);
                if (hi > lo) pieces.push_back(Arc::from_endpoints(lo, hi));
            }
        }
    }
    return ArcSet(std::move(pieces));
}

ArcSet ArcSet::conjugate() const
{
    if (full_) return *this;
    std::vector<Arc> out;
    for (const auto& x : intervals_) out.push_back(Arc::from_endpoints(-x.hi, -x.lo));
    return ArcSet(std::move(out));
}

bool ArcSet::approx_equal(const ArcSet& other, double tol) const
{
    if (full_ || other.full_) return full_ == other.full_;
    if (intervals_.size() != other.intervals_.size()) return false;
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto& a = intervals_[i];
        const auto& b = other.intervals_[i];
        // Starts may sit on opposite sides of the -pi/pi cut.
        const double dlo = std::abs(normalize_angle(a.lo - b.lo));
        if (dlo > tol || std::abs(a.length() - b.length()) > tol) return false;
    }
    return true;
}

RealSegmentSet::RealSegmentSet(std::vector<Segment> segments)
{
    for (const auto& s : segments) {
        if (!(s.lo <= s.hi)) throw InvalidArgument("segment requires lo <= hi");
    }
    std::sort(segments.begin(), segments.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    for (const auto& s : segments) {
        if (!segments_.empty() && s.lo <= segments_.back().hi + kArcTolerance)
            segments_.back().hi = std::max(segments_.back().hi, s.hi);
        else
            segments_.push_back(s);
    }
}

ArcSet gamma_arc(double beta, double theta0)
{
    return ArcSet({Arc::centered(theta0, beta)});
}

ArcSet equidistant_arcs(int k, double alpha, double theta0)
{
    if (k < 1) throw InvalidArgument("equidistant_arcs requires k >= 1");
    std::vector<Arc> arcs;
    for (int m = 0; m < k; ++m) arcs.push_back(Arc::centered(theta0 + kTwoPi * m / k, alpha));
    return ArcSet(std::move(arcs));
}

ArcSet symmetric_pair(double alpha, double delta, double theta0)
{
    if (!(alpha > 0.0) || delta < 0.0 || alpha + delta > kPi + kArcTolerance)
        throw InvalidArgument("symmetric_pair requires alpha > 0, delta >= 0, alpha + delta <= pi");
    return ArcSet({Arc::from_endpoints(theta0 + delta, theta0 + delta + alpha),
                   Arc::from_endpoints(theta0 - delta - alpha, theta0 - delta)});
}

ArcSet four_arc(double alpha, double delta, double theta0)
{
    if (!(alpha > 0.0) || delta < 0.0 || alpha + delta > 0.5 * kPi + kArcTolerance)
        throw InvalidArgument("four_arc requires alpha > 0, delta >= 0, alpha + delta <= pi/2");
    return ArcSet({Arc::from_endpoints(theta0 + delta, theta0 + delta + alpha),
                   Arc::from_endpoints(theta0 - delta - alpha, theta0 - delta),
                   Arc::from_endpoints(theta0 + kPi - delta - alpha, theta0 + kPi - delta),
                   Arc::from_endpoints(theta0 - kPi + delta, theta0 - kPi + delta + alpha)});
}

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Image of a k-fold rotationally symmetric set under z^k, when the symmetry holds.
std::optional<ArcSet> power_image(const std::vector<AngleInterval>& iv, int k)
{
    const std::size_t m = iv.size();
    if (k < 2 || m % static_cast<std::size_t>(k) != 0) return std::nullopt;
    const std::size_t step = m / static_cast<std::size_t>(k);
    const double tol = kArcTolerance * k;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = iv[i];
        const auto& b = iv[(i + step) % m];
        if (!close(a.length(), b.length(), tol)) return std::nullopt;
        if (!close(normalize_angle(b.lo - a.lo - kTwoPi / k), 0.0, tol)) return std::nullopt;
    }
    std::vector<Arc> image;
    for (std::size_t i = 0; i < step; ++i)
        image.push_back(Arc::centered(k * 0.5 * (iv[i].lo + iv[i].hi), std::min(kTwoPi, k * iv[i].length())));
    return ArcSet(std::move(image));
}

std::optional<double> closed_form_impl(const ArcSet& F, int depth)
{
    if (F.is_full_circle()) return 1.0;
    if (F.empty() || depth > 8) return std::nullopt;
    const auto iv = F.intervals();
    const std::size_t m = iv.size();
    if (m == 1) return std::sin(iv[0].length() / 4.0);

    for (int k = static_cast<int>(m); k >= 2; --k) {
        if (auto image = power_image(iv, k)) {
            if (auto t = closed_form_impl(*image, depth + 1)) return std::pow(*t, 1.0 / k);
        }
    }
    if (m == 2 && close(iv[0].length(), iv[1].length(), kArcTolerance)) {
        const double alpha = iv[0].length();
        const double gap = normalize_angle(iv[1].lo - iv[0].hi);
        const double two_delta = gap < 0.0 ? gap + kTwoPi : gap;
        return std::sqrt(std::sin(alpha / 2.0) * std::sin(alpha / 2.0 + two_delta / 2.0));
    }
    return std::nullopt;
}

}  // namespace

std::optional<double> closed_form_tau(const ArcSet& F)
{
    return closed_form_impl(F, 0);
}

double segment_tau(const RealSegmentSet& S)
{
    const auto& s = S.segments();
    if (s.empty()) throw InvalidArgument("segment_tau of an empty set");
    if (s.size() > 1) throw MultiSegment("no closed form for " + std::to_string(s.size()) + " segments");
    return (s[0].hi - s[0].lo) / 4.0;
}

ArcSet rotate(const ArcSet& F, double theta)
{
    if (F.is_full_circle() || F.empty()) return F;
    std::vector<Arc> out;
    for (const Arc& a : F.arcs()) out.push_back(Arc::centered(a.center + theta, a.length));
    return ArcSet(std::move(out));
}

RealSegmentSet project_real(const ArcSet& F)
{
    if (!F.approx_equal(F.conjugate(), 1e-9))
        throw NotSymmetric("arc set is not symmetric with respect to the real axis");
    std::vector<Segment> segs;
    for (const auto& x : F.intervals()) {
        const bool has_zero = std::floor(x.hi / kTwoPi) >= std::ceil(x.lo / kTwoPi);
        const bool has_pi = std::floor((x.hi - kPi) / kTwoPi) >= std::ceil((x.lo - kPi) / kTwoPi);
        const double c1 = std::cos(x.lo);
        const double c2 = std::cos(x.hi);
        segs.push_back({has_pi ? -1.0 : std::min(c1, c2), has_zero ? 1.0 : std::max(c1, c2)});
    }
    return RealSegmentSet(std::move(segs));
}

ArcSet preimage_power(const ArcSet& F, int k)
{
    if (k < 1) throw InvalidArgument("preimage_power requires k >= 1");
    if (F.is_full_circle() || F.empty() || k == 1) return F;
    std::vector<Arc> out;
    for (const auto& x : F.intervals()) {
        for (int m = 0; m < k; ++m) {
            const double shift = kTwoPi * m / k;
            out.push_back(Arc::from_endpoints(x.lo / k + shift, x.hi / k + shift));
        }
    }
    return ArcSet(std::move(out));
}

}  // namespace predlab
