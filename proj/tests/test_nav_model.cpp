#include "fdkb/error.hpp"
#include "fdkb/kb_store.hpp"
#include "fdkb/nav_model.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace fdkb;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

std::vector<std::string> labels(const PieSector& s) {
    std::vector<std::string> out;
    for (const auto& c : s.children) out.push_back(c.label);
    return out;
}

std::vector<double> percents(const PieSector& s) {
    std::vector<double> out;
    for (const auto& c : s.children) out.push_back(c.percent);
    return out;
}

std::int64_t hundredths_sum(const PieSector& s) {
    std::int64_t total = 0;
    for (const auto& c : s.children) total += std::llround(c.percent * 100);
    return total;
}

const PieSector& child(const PieSector& s, const std::string& label) {
    for (const auto& c : s.children) {
        if (c.label == label) return c;
    }
    FAIL("no child " << label);
    return s;
}

} // namespace

TEST_CASE("allocate_hundredths") {
    CHECK(allocate_hundredths({3, 1}) == std::vector<std::int64_t>{7500, 2500});
    CHECK(allocate_hundredths({0, 0, 0}) == std::vector<std::int64_t>{3334, 3333, 3333});
    CHECK(allocate_hundredths({1}) == std::vector<std::int64_t>{10000});
    CHECK(allocate_hundredths({}).empty());
    // A sliver still shows up as the smallest visible slice.
    const auto tiny = allocate_hundredths({1e9, 1});
    CHECK(tiny[1] == 1);
    CHECK(tiny[0] + tiny[1] == 10000);
}

TEST_CASE("allocate_hundredths equals the exact integer tally on random weights") {
    std::mt19937 rng(31);
    for (int run = 0; run < 2000; ++run) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<std::int64_t> counts(n);
        for (auto& c : counts) c = rng() % 4 == 0 ? 0 : static_cast<std::int64_t>(rng() % 50);
        std::vector<double> weights(counts.begin(), counts.end());
        auto expected = oracle::tally_percents(counts);
        // Zero-weight entries in a non-zero total are lifted to one unit, taken
        // from the largest entries.
        const auto got = allocate_hundredths(weights);
        REQUIRE(got.size() == n);
        CHECK(std::accumulate(got.begin(), got.end(), std::int64_t{0}) == 10000);
        bool lifted = false;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(got[i] >= 1);
            lifted |= expected[i] == 0;
        }
        if (!lifted) CHECK(got == expected);
    }
}

TEST_CASE("build_root") {
    SUBCASE("empty KB") {
        const auto model = build_root(KnowledgeBase{});
        CHECK(model.root.label == "Thing");
        CHECK(model.root.kind == SectorKind::Class);
        CHECK(model.root.source_iri == "Thing");
        CHECK(model.root.children.empty());
        CHECK_FALSE(model.root.expandable);
    }
    SUBCASE("3 and 1 individuals split 75/25") {
        KnowledgeBase kb;
        kb.define_class({"A", "", {}});
        kb.define_class({"A1", "", {"A"}});
        kb.define_class({"B", "", {}});
        kb.assert_individual({"x", {"x"}, {"A"}});
        kb.assert_individual({"y", {"y"}, {"A1"}});
        kb.assert_individual({"z", {"z"}, {"A1"}});
        kb.assert_individual({"w", {"w"}, {"B"}});
        // Transitive counts, computed independently.
        CHECK(oracle::members(kb, "A").size() == 3);
        CHECK(oracle::members(kb, "B").size() == 1);
        const auto model = build_root(kb);
        CHECK(labels(model.root) == std::vector<std::string>{"A", "B"});
        CHECK(percents(model.root) == std::vector<double>{75.0, 25.0});
    }
    SUBCASE("3 empty classes split uniformly") {
        KnowledgeBase kb;
        for (auto c : {"A", "B", "C"}) kb.define_class({c, "", {}});
        const auto model = build_root(kb);
        CHECK(percents(model.root) == std::vector<double>{33.34, 33.33, 33.33});
        CHECK(hundredths_sum(model.root) == 10000);
        for (const auto& c : model.root.children) CHECK_FALSE(c.expandable);
    }
    SUBCASE("news fixture") {
        const auto state = oracle::seeded_state();
        const auto model = build_root(state.kb);
        CHECK(labels(model.root) == std::vector<std::string>{"Ship", "TypologyOfNewsObject", "passenger", "sinking"});
        CHECK(hundredths_sum(model.root) == 10000);
        CHECK(model.revision == state.kb.revision());
    }
}

TEST_CASE("expand") {
    const auto state = oracle::seeded_state();
    const auto& kb = state.kb;
    const auto root = build_root(kb).root;

    const auto sinking = expand(kb, child(root, "sinking"));
    CHECK(labels(sinking) == std::vector<std::string>{"passengerShipwreck", "captain", "rescue", "ship"});
    CHECK(sinking.children[0].kind == SectorKind::Class);
    std::set<std::string> individuals;
    for (const auto& c : sinking.children) {
        if (c.kind == SectorKind::Individual) individuals.insert(c.label);
    }
    CHECK(individuals == std::set<std::string>{"ship", "captain", "rescue"});
    CHECK(hundredths_sum(sinking) == 10000);

    const auto passenger = expand(kb, child(root, "passenger"));
    std::set<std::string> members;
    for (const auto& c : passenger.children) {
        if (c.kind == SectorKind::Individual) members.insert(c.label);
    }
    CHECK(members == std::set<std::string>{"ship", "plane", "train"});

    SUBCASE("individual sectors follow the hierarchy") {
        const auto ship = expand(kb, child(sinking, "ship"));
        CHECK(labels(ship) == std::vector<std::string>{"captain", "rescue"});
        CHECK(ship.children[0].id == ship.id + "/i:captain");
        CHECK(percents(ship) == std::vector<double>{50.0, 50.0});
    }
    SUBCASE("individual without children") {
        auto captain = child(sinking, "captain");
        CHECK_FALSE(captain.expandable);
        const auto expanded = expand(kb, captain);
        CHECK(expanded.children.empty());
        CHECK_FALSE(expanded.expandable);
    }
    SUBCASE("empty class is not expandable") {
        KnowledgeBase small;
        small.define_class({"Empty", "", {}});
        const auto r = build_root(small).root;
        CHECK(code_of([&] { expand(small, r.children.at(0)); }) == ErrorCode::NotExpandable);
    }
    SUBCASE("weight overrides replace computed weights") {
        NavOptions opts;
        opts.weight_overrides = {{"sinking", 60.0}, {"passenger", 40.0}, {"Ship", 0.0}, {"TypologyOfNewsObject", 0.0}};
        const auto r = build_root(kb, opts).root;
        CHECK(child(r, "sinking").percent == doctest::Approx(59.99).epsilon(0.001));
        CHECK(child(r, "Ship").percent == 0.01);
        CHECK(hundredths_sum(r) == 10000);
    }
}

TEST_CASE("order_children") {
    const auto state = oracle::seeded_state();
    const auto& kb = state.kb;
    const auto sinking = expand(kb, child(build_root(kb).root, "sinking"));
    SUBCASE("classes always come first") {
        auto shuffled = sinking.children;
        std::reverse(shuffled.begin(), shuffled.end());
        const auto ordered = order_children(kb, shuffled, std::nullopt);
        CHECK(ordered.front().kind == SectorKind::Class);
        CHECK(ordered == sinking.children);
    }
    SUBCASE("total order") {
        const auto pw = expand(kb, child(sinking, "passengerShipwreck"));
        CHECK(labels(pw) == std::vector<std::string>{"ferry", "titanic"});
        NavOptions opts;
        opts.order_property = "isFollowedBy";
        const auto focus = combine_focus(kb, {"sinking", "passenger"}, opts);
        CHECK(labels(focus.root) == std::vector<std::string>{"ship", "ferry", "titanic"});
    }
    SUBCASE("non total-order property propagates") {
        CHECK(code_of([&] { order_children(kb, sinking.children, std::string("PartOf")); }) == ErrorCode::NotTotalOrder);
    }
}

TEST_CASE("combine_focus") {
    const auto state = oracle::seeded_state();
    const auto& kb = state.kb;
    NavOptions opts;
    opts.order_property = "isFollowedBy";

    const auto single = combine_focus(kb, {"sinking"});
    std::set<std::string> expected;
    for (const auto& [iri, _] : kb.individuals()) {
        if (oracle::member_of(kb, iri, "sinking")) expected.insert(iri);
    }
    std::set<std::string> got;
    for (const auto& c : single.root.children) got.insert(c.source_iri);
    CHECK(got == expected);
    CHECK(single.focus_tags == std::vector<std::string>{"sinking"});

    const auto both = combine_focus(kb, {"sinking", "passenger"}, opts);
    CHECK(labels(both.root) == std::vector<std::string>{"ship", "ferry", "titanic"});
    CHECK(percents(both.root) == std::vector<double>{33.34, 33.33, 33.33});
    CHECK_FALSE(both.empty);

    const auto dup = combine_focus(kb, {"sinking", "passenger", "sinking"}, opts);
    CHECK(dup == both);

    CHECK(code_of([&] { combine_focus(kb, {"sinking", "weather"}); }) == ErrorCode::UnknownTag);

    const auto disjoint = combine_focus(kb, {"Ship", "TypologyOfNewsObject"});
    CHECK(disjoint.empty);
    CHECK(disjoint.root.children.empty());
}

TEST_CASE("colorize") {
    SUBCASE("fresh network is red") {
        auto state = oracle::seeded_state();
        const auto model = colorize(build_root(state.kb), state.fsn);
        CHECK(child(model.root, "sinking").color == Rgb{255, 0, 0});
        CHECK(child(model.root, "passenger").color == Rgb{255, 0, 0});
        CHECK(child(model.root, "Ship").color == kNeutralColor);
        CHECK(model.root.color == kNeutralColor);
    }
    SUBCASE("tag without links is neutral") {
        auto state = oracle::seeded_state();
        state.fsn.apply(change::EditContext{"passenger", FormalContext({"o"}, {"sky"}, {})});
        REQUIRE(state.fsn.links().empty());
        const auto model = colorize(build_root(state.kb), state.fsn);
        CHECK(child(model.root, "sinking").color == kNeutralColor);
    }
    SUBCASE("mixed fixture matches recomputed mean strain colors") {
        KnowledgeBase kb;
        FsnGraph fsn;
        std::mt19937 rng(5);
        for (int i = 0; i < 6; ++i) {
            const std::string id = "tag" + std::to_string(i);
            kb.define_class({id, "", {}});
            fsn.apply(change::AddTag{oracle::make_tag(id, {"o", "p"}, {"a", "b", i % 2 ? "c" : "d"}, 1 + i % 3, 0,
                                                      0, static_cast<std::uint64_t>(i))});
        }
        for (int i = 0; i < 6; ++i) {
            const std::uint64_t imp = 2 + rng() % 8;
            fsn.apply(change::UpdateExposition{"tag" + std::to_string(i), TimeExposition(rng() % imp, imp)});
        }
        const auto model = colorize(build_root(kb), fsn);
        std::set<std::array<int, 3>> distinct;
        for (const auto& s : model.root.children) {
            double sum = 0;
            int n = 0;
            for (const auto& [k, l] : fsn.links()) {
                if (k.first == s.source_iri || k.second == s.source_iri) {
                    sum += std::fabs(l.strain);
                    ++n;
                }
            }
            const Rgb expected = n ? region_color(sum / n, fsn.params()) : kNeutralColor;
            CHECK(s.color == expected);
            distinct.insert({s.color.r, s.color.g, s.color.b});
        }
        CHECK(distinct.size() > 1);
    }
}

TEST_CASE("table_to_pie") {
    KnowledgeBase kb;
    kb.assert_individual({"a", {"A label"}, {}});
    SUBCASE("single row") {
        ResultTable t{{"x"}, {{Iri{"a"}}}};
        const auto m = table_to_pie(t, kb);
        REQUIRE(m.root.children.size() == 1);
        CHECK(m.root.children[0].percent == 100.0);
        CHECK(m.root.children[0].label == "A label");
        CHECK_FALSE(m.empty);
    }
    SUBCASE("rows 2/1/1") {
        ResultTable t{{"x", "y"},
                      {{Iri{"a"}, Literal{"1"}}, {Iri{"a"}, Literal{"2"}}, {Iri{"b"}, Literal{"1"}},
                       {Iri{"c"}, Literal{"1"}}}};
        const auto m = table_to_pie(t, kb);
        std::vector<std::int64_t> counts{2, 1, 1};
        std::vector<double> expected;
        for (auto u : oracle::tally_percents(counts)) expected.push_back(static_cast<double>(u) / 100.0);
        CHECK(expected == std::vector<double>{50.0, 25.0, 25.0});
        CHECK(percents(m.root) == expected);
        CHECK(labels(m.root) == std::vector<std::string>{"A label", "b", "c"});
    }
    SUBCASE("empty table") {
        const auto m = table_to_pie(ResultTable{{"x"}, {}}, kb);
        CHECK(m.empty);
        CHECK(m.root.children.empty());
    }
    SUBCASE("literal first column") {
        ResultTable t{{"n"}, {{Literal{"1912", "integer"}}}};
        CHECK(table_to_pie(t, kb).root.children.at(0).label == "1912");
    }
}

TEST_CASE("sector ids round trip") {
    auto state = oracle::seeded_state();
    auto& kb = state.kb;
    kb.define_class({"odd/class%name", "", {}});
    kb.assert_individual({"urn:x/y", {"slashy"}, {"odd/class%name"}});
    const auto root = build_root(kb).root;
    const auto& odd = child(root, "odd/class%name");
    CHECK(odd.id == "c:Thing/c:odd%2Fclass%25name");
    const auto expanded = expand(kb, odd);
    const auto& slashy = expanded.children.at(0);
    CHECK(slashy.id == "c:Thing/c:odd%2Fclass%25name/i:urn:x%2Fy");
    auto back = sector_from_id(kb, slashy.id);
    CHECK(back.source_iri == "urn:x/y");
    CHECK(back.id == slashy.id);
    CHECK(back.kind == SectorKind::Individual);

    // Every sector reachable in two levels resolves to itself.
    for (const auto& top : root.children) {
        auto s = sector_from_id(kb, top.id);
        // Percents belong to the parent's layout, not to the id.
        s.percent = top.percent;
        CHECK(s == top);
        if (!top.expandable) continue;
        for (const auto& c : expand(kb, top).children) {
            auto r = sector_from_id(kb, c.id);
            CHECK(r.source_iri == c.source_iri);
            CHECK(r.expandable == c.expandable);
        }
    }
    CHECK(code_of([&] { sector_from_id(kb, "c:Thing/x:ship"); }) == ErrorCode::UnknownSector);
    CHECK(code_of([&] { sector_from_id(kb, "c:Thing/i:ghost"); }) == ErrorCode::UnknownSector);
}

TEST_CASE("model JSON") {
    const auto state = oracle::seeded_state();
    const auto j = to_json(colorize(build_root(state.kb), state.fsn));
    CHECK(j.at("root").at("label") == "Thing");
    CHECK(j.at("root").at("children").size() == 4);
    CHECK(j.at("root").at("children").at(3).at("color") == nlohmann::json::array({255, 0, 0}));
}
