#include "fdkb/fd_core.hpp"

#include "fdkb/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fdkb {

FormalContext::FormalContext(std::set<std::string> objects, std::set<std::string> attributes,
                             Incidence incidence)
    : objects_(std::move(objects)), attributes_(std::move(attributes)), incidence_(std::move(incidence)) {
    for (const auto& [object, attribute] : incidence_) {
        if (!objects_.count(object) || !attributes_.count(attribute)) {
            throw Error(ErrorCode::InvalidArgument,
                        "incidence pair (" + object + ", " + attribute + ") is outside T x D");
        }
    }
}

TimeExposition::TimeExposition(std::uint64_t clicks, std::uint64_t impressions)
    : clicks_(clicks), impressions_(impressions) {
    if (clicks_ > impressions_) {
        throw Error(ErrorCode::InvalidArgument, "clicks exceed impressions");
    }
}

bool is_absolute_uri(std::string_view uri) {
    auto colon = uri.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= uri.size()) return false;
    if (!std::isalpha(static_cast<unsigned char>(uri[0]))) return false;
    for (std::size_t i = 1; i < colon; ++i) {
        unsigned char ch = static_cast<unsigned char>(uri[i]);
        if (!std::isalnum(ch) && ch != '+' && ch != '-' && ch != '.') return false;
    }
    return std::none_of(uri.begin(), uri.end(),
                        [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

Resource::Resource(std::string uri, std::uint64_t ordinal) : uri_(std::move(uri)), ordinal_(ordinal) {
    if (!is_absolute_uri(uri_)) {
        throw Error(ErrorCode::InvalidArgument, "resource uri is not absolute: " + uri_);
    }
}

double interval_distance(const MinkowskiPoint& a, const MinkowskiPoint& b) {
    MinkowskiPoint d{a.c - b.c, a.r - b.r, a.e - b.e};
    return std::sqrt(std::abs(d.interval()));
}

double compute_ctr(const TimeExposition& exposition) {
    if (exposition.impressions() == 0) {
        throw Error(ErrorCode::ZeroImpressions, "ctr is undefined for a resource with no impressions");
    }
    return static_cast<double>(exposition.clicks()) / static_cast<double>(exposition.impressions());
}

double context_density(const FormalContext& context) {
    const double cells = static_cast<double>(context.objects().size()) *
                         static_cast<double>(context.attributes().size());
    if (cells == 0.0) return 0.0;
    return static_cast<double>(context.incidence().size()) / cells;
}

MinkowskiPoint embed(const FormalContext& context, const TimeExposition& exposition,
                     const Resource& resource) {
    MinkowskiPoint p;
    p.c = context_density(context);
    const double ordinal = static_cast<double>(resource.ordinal());
    p.r = ordinal / (1.0 + ordinal);
    // Never-displayed tags sit at e = 0 so the embedding stays total.
    p.e = exposition.impressions() == 0 ? 0.0 : compute_ctr(exposition);
    return p;
}

MinkowskiPoint embed(const FolksodrivenTag& tag) {
    return embed(tag.context(), tag.exposition(), tag.resource());
}

FolksodrivenTag::FolksodrivenTag(std::string id, std::string label, FormalContext context,
                                 TimeExposition exposition, Resource resource)
    : id_(std::move(id)),
      label_(std::move(label)),
      context_(std::move(context)),
      exposition_(exposition),
      resource_(std::move(resource)) {
    point_ = embed(*this);
}

void FolksodrivenTag::set_context(FormalContext context) {
    context_ = std::move(context);
    point_ = embed(*this);
}

void FolksodrivenTag::set_exposition(TimeExposition exposition) {
    exposition_ = exposition;
    point_ = embed(*this);
}

void FolksodrivenTag::set_resource(Resource resource) {
    resource_ = std::move(resource);
    point_ = embed(*this);
}

// ---------------------------------------------------------------------------

std::string_view region_name(Region region) {
    switch (region) {
    case Region::Elastic: return "Elastic";
    case Region::Yield: return "Yield";
    case Region::Necking: return "Necking";
    }
    return "Elastic";
}

Region region_from_name(std::string_view name) {
    if (name == "Elastic") return Region::Elastic;
    if (name == "Yield") return Region::Yield;
    if (name == "Necking") return Region::Necking;
    throw Error(ErrorCode::InvalidArgument, "unknown region: " + std::string(name));
}

void ElasticityParams::validate() const {
    if (!(modulus > 0.0)) throw Error(ErrorCode::InvalidArgument, "modulus must be > 0");
    if (!(yield_strain > 0.0)) throw Error(ErrorCode::InvalidArgument, "yield_strain must be > 0");
    if (!(necking_strain > yield_strain)) {
        throw Error(ErrorCode::InvalidArgument, "necking_strain must exceed yield_strain");
    }
    if (!(post_yield_slope >= 0.0)) throw Error(ErrorCode::InvalidArgument, "post_yield_slope must be >= 0");
}

namespace {

void require_non_negative(double strain) {
    if (strain < 0.0 || std::isnan(strain)) {
        throw Error(ErrorCode::NegativeStrain, "strain must be non-negative");
    }
}

std::uint8_t lerp_channel(std::uint8_t from, std::uint8_t to, double t) {
    const double v = static_cast<double>(from) + (static_cast<double>(to) - static_cast<double>(from)) * t;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

Rgb lerp(const Rgb& from, const Rgb& to, double t) {
    return {lerp_channel(from.r, to.r, t), lerp_channel(from.g, to.g, t), lerp_channel(from.b, to.b, t)};
}

} // namespace

Region classify_region(double /*stress*/, double strain, const ElasticityParams& params) {
    require_non_negative(strain);
    if (strain < params.yield_strain) return Region::Elastic;
    if (strain < params.necking_strain) return Region::Yield;
    return Region::Necking;
}

Rgb region_color(double strain, const ElasticityParams& params) {
    require_non_negative(strain);
    const double y = params.yield_strain;
    const double n = params.necking_strain;
    if (strain < y) return lerp(kElasticColor, kYieldColor, strain / y);
    if (strain < n) return lerp(kYieldColor, kNeckingColor, (strain - y) / (n - y));
    if (strain < 2.0 * n) return lerp(kNeckingColor, kFractureColor, (strain - n) / n);
    return kFractureColor;
}

double stress_at(double strain, const ElasticityParams& params) {
    require_non_negative(strain);
    const double y = params.yield_strain;
    const double n = params.necking_strain;
    if (strain < y) return params.modulus * strain;
    const double at_yield = params.modulus * y;
    if (strain < n) return at_yield + params.post_yield_slope * (strain - y);
    const double at_necking = at_yield + params.post_yield_slope * (n - y);
    if (strain < 2.0 * n) return at_necking * (2.0 * n - strain) / n;
    return 0.0;
}

StressStrainSample sample_at(double strain, const ElasticityParams& params) {
    const double stress = stress_at(strain, params);
    return {stress, strain, classify_region(stress, strain, params)};
}

} // namespace fdkb
