#pragma once

// Folksodriven tag tuple (formal context, time exposition, resource, point)
// and the stress-strain elasticity model used to color the navigation chart.

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>

namespace fdkb {

/// Formal context (T, D, I): objects, attributes and their incidence relation.
/// Construction rejects incidence pairs that reference unknown objects or
/// attributes.
class FormalContext {
public:
    using Incidence = std::set<std::pair<std::string, std::string>>;

    FormalContext() = default;
    FormalContext(std::set<std::string> objects, std::set<std::string> attributes, Incidence incidence);

    const std::set<std::string>& objects() const noexcept { return objects_; }
    const std::set<std::string>& attributes() const noexcept { return attributes_; }
    const Incidence& incidence() const noexcept { return incidence_; }

    bool operator==(const FormalContext&) const = default;

private:
    std::set<std::string> objects_;
    std::set<std::string> attributes_;
    Incidence incidence_;
};

/// Clicks over impressions. clicks <= impressions is enforced at construction.
class TimeExposition {
public:
    TimeExposition() = default;
    TimeExposition(std::uint64_t clicks, std::uint64_t impressions);

    std::uint64_t clicks() const noexcept { return clicks_; }
    std::uint64_t impressions() const noexcept { return impressions_; }

    bool operator==(const TimeExposition&) const = default;

private:
    std::uint64_t clicks_ = 0;
    std::uint64_t impressions_ = 0;
};

class Resource {
public:
    Resource() = default;
    /// Throws InvalidArgument unless `uri` is absolute (scheme ":" rest).
    Resource(std::string uri, std::uint64_t ordinal);

    const std::string& uri() const noexcept { return uri_; }
    std::uint64_t ordinal() const noexcept { return ordinal_; }

    bool operator==(const Resource&) const = default;

private:
    std::string uri_ = "urn:fdkb:none";
    std::uint64_t ordinal_ = 0;
};

bool is_absolute_uri(std::string_view uri);

/// Point in the (+,+,-) space spanned by context density, resource and the
/// time-like exposition coordinate.
struct MinkowskiPoint {
    double c = 0.0;
    double r = 0.0;
    double e = 0.0;

    double interval() const noexcept { return c * c + r * r - e * e; }
    bool time_like() const noexcept { return interval() < 0.0; }

    bool operator==(const MinkowskiPoint&) const = default;
};

/// sqrt(|s^2|) of the separation between two points.
double interval_distance(const MinkowskiPoint& a, const MinkowskiPoint& b);

class FolksodrivenTag;
MinkowskiPoint embed(const FormalContext& context, const TimeExposition& exposition,
                     const Resource& resource);
MinkowskiPoint embed(const FolksodrivenTag& tag);

/// The FD tuple. The point is derived state and is recomputed on every
/// mutation, so it always equals embed() of the other three components.
class FolksodrivenTag {
public:
    FolksodrivenTag() = default;
    FolksodrivenTag(std::string id, std::string label, FormalContext context,
                    TimeExposition exposition, Resource resource);

    const std::string& id() const noexcept { return id_; }
    const std::string& label() const noexcept { return label_; }
    const FormalContext& context() const noexcept { return context_; }
    const TimeExposition& exposition() const noexcept { return exposition_; }
    const Resource& resource() const noexcept { return resource_; }
    const MinkowskiPoint& point() const noexcept { return point_; }

    void set_label(std::string label) { label_ = std::move(label); }
    void set_context(FormalContext context);
    void set_exposition(TimeExposition exposition);
    void set_resource(Resource resource);

    bool operator==(const FolksodrivenTag&) const = default;

private:
    std::string id_;
    std::string label_;
    FormalContext context_;
    TimeExposition exposition_;
    Resource resource_;
    MinkowskiPoint point_;
};

/// Throws ZeroImpressions when the resource has never been displayed.
double compute_ctr(const TimeExposition& exposition);

/// |I| / (|T|·|D|), 0 for an empty object or attribute set.
double context_density(const FormalContext& context);

// ---------------------------------------------------------------------------
// Elasticity

enum class Region { Elastic, Yield, Necking };

std::string_view region_name(Region region);
Region region_from_name(std::string_view name);

struct ElasticityParams {
    double modulus = 1.0;
    double yield_strain = 0.2;
    double necking_strain = 0.6;
    double post_yield_slope = 0.25;

    /// Throws InvalidArgument when the invariants do not hold.
    void validate() const;

    bool operator==(const ElasticityParams&) const = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kElasticColor{255, 0, 0};
inline constexpr Rgb kYieldColor{0, 160, 0};
inline constexpr Rgb kNeckingColor{128, 0, 128};
inline constexpr Rgb kFractureColor{32, 0, 32};
inline constexpr Rgb kNeutralColor{200, 200, 200};

struct StressStrainSample {
    double stress = 0.0;
    double strain = 0.0;
    Region region = Region::Elastic;
};

// Boundaries belong to the higher region.
Region classify_region(double stress, double strain, const ElasticityParams& params);
Rgb region_color(double strain, const ElasticityParams& params);
double stress_at(double strain, const ElasticityParams& params);

/// Evaluates stress and region together for one strain value.
StressStrainSample sample_at(double strain, const ElasticityParams& params);

} // namespace fdkb
