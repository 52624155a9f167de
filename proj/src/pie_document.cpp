#include "fdkb/pie_document.hpp"

#include "fdkb/error.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace fdkb {

namespace {

struct XmlNode {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::vector<XmlNode> children;
    std::string text; // concatenated character data
    std::size_t line = 1;
};

class XmlReader {
public:
    explicit XmlReader(std::string_view s) : s_(s) {}

    XmlNode document() {
        if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        skip_misc();
        if (starts("<?xml")) {
            auto end = s_.find("?>", pos_);
            if (end == std::string_view::npos) fail("unterminated XML declaration");
            move_to(end + 2);
        }
        skip_misc();
        if (starts("<!DOCTYPE")) fail("DOCTYPE is not allowed");
        if (!starts("<")) fail("expected root element");
        XmlNode root = element();
        skip_misc();
        if (pos_ < s_.size()) fail("content after the root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& reason) const {
        throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(line_) + ": " + reason,
                    {{"line", line_}, {"reason", reason}});
    }

    bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    void move_to(std::size_t target) {
        while (pos_ < target) {
            if (s_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) move_to(pos_ + 1);
    }

    void skip_misc() {
        while (true) {
            skip_space();
            if (!starts("<!--")) return;
            auto end = s_.find("-->", pos_ + 4);
            if (end == std::string_view::npos) fail("unterminated comment");
            move_to(end + 3);
        }
    }

    std::string name() {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.') ++pos_;
            else break;
        }
        if (start == pos_) fail("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string decode(std::string_view raw) const {
        std::string out;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '<') fail("unexpected '<' in character data");
            if (raw[i] != '&') {
                out.push_back(raw[i]);
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) fail("unterminated entity reference");
            const auto ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "amp") out.push_back('&');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (ent.size() > 1 && ent[0] == '#') {
                unsigned long cp = 0;
                try {
                    cp = ent[1] == 'x' ? std::stoul(std::string(ent.substr(2)), nullptr, 16)
                                       : std::stoul(std::string(ent.substr(1)), nullptr, 10);
                } catch (const std::exception&) {
                    fail("bad character reference");
                }
                append_utf8(out, cp);
            } else {
                fail("unknown entity &" + std::string(ent) + ";");
            }
            i = semi;
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned long cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    XmlNode element() {
        XmlNode node;
        node.line = line_;
        move_to(pos_ + 1); // '<'
        node.name = name();
        while (true) {
            skip_space();
            if (pos_ >= s_.size()) fail("unterminated start tag <" + node.name + ">");
            if (starts("/>")) {
                move_to(pos_ + 2);
                return node;
            }
            if (starts(">")) {
                move_to(pos_ + 1);
                break;
            }
            auto attr = name();
            skip_space();
            if (!starts("=")) fail("expected '=' after attribute " + attr);
            move_to(pos_ + 1);
            skip_space();
            if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted attribute value");
            const char q = s_[pos_];
            auto end = s_.find(q, pos_ + 1);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            auto value = decode(s_.substr(pos_ + 1, end - pos_ - 1));
            if (!node.attrs.emplace(attr, std::move(value)).second) fail("duplicate attribute " + attr);
            move_to(end + 1);
        }
        while (true) {
            if (pos_ >= s_.size()) fail("missing </" + node.name + ">");
            if (starts("</")) {
                move_to(pos_ + 2);
                auto closing = name();
                if (closing != node.name) fail("mismatched </" + closing + ">, expected </" + node.name + ">");
                skip_space();
                if (!starts(">")) fail("expected '>'");
                move_to(pos_ + 1);
                return node;
            }
            if (starts("<!--")) {
                auto end = s_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                move_to(end + 3);
                continue;
            }
            if (starts("<![CDATA[")) {
                auto end = s_.find("]]>", pos_);
                if (end == std::string_view::npos) fail("unterminated CDATA section");
                node.text += std::string(s_.substr(pos_ + 9, end - pos_ - 9));
                move_to(end + 3);
                continue;
            }
            if (starts("<")) {
                node.children.push_back(element());
                continue;
            }
            auto next = s_.find('<', pos_);
            if (next == std::string_view::npos) next = s_.size();
            node.text += decode(s_.substr(pos_, next - pos_));
            move_to(next);
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

bool blank(const std::string& s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
    throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(line) + ": " + reason,
                {{"line", line}, {"reason", reason}});
}

std::int64_t parse_percent(const std::string& raw, std::size_t line) {
    const std::string text = trim(raw);
    auto bad = [&](const std::string& why) {
        throw Error(ErrorCode::BadPercent, "line " + std::to_string(line) + ": percent " + why,
                    {{"line", line}, {"value", text}});
    };
    std::size_t i = 0;
    std::int64_t whole = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (whole > 1000) bad("is out of range (0, 100]");
        whole = whole * 10 + (text[i] - '0');
        ++i;
    }
    if (i == 0) bad("is not a number");
    std::int64_t frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        std::size_t digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (++digits > 2) bad("has more than two fraction digits");
            frac = frac * 10 + (text[i] - '0');
            ++i;
        }
        if (digits == 0) bad("is not a number");
        if (digits == 1) frac *= 10;
    }
    if (i != text.size()) bad("is not a number");
    const std::int64_t hundredths = whole * 100 + frac;
    if (hundredths <= 0 || hundredths > 10000) bad("is out of range (0, 100]");
    return hundredths;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

PieDocument import_pie_document(std::string_view bytes) {
    const XmlNode root = XmlReader(bytes).document();
    if (root.name != "piechart") malformed(root.line, "root element must be <piechart>");
    if (!root.attrs.empty()) malformed(root.line, "<piechart> takes no attributes");
    if (!blank(root.text)) malformed(root.line, "unexpected text inside <piechart>");

    PieDocument doc;
    for (const auto& slice : root.children) {
        if (slice.name != "slice") malformed(slice.line, "unexpected element <" + slice.name + ">");
        if (!blank(slice.text)) malformed(slice.line, "unexpected text inside <slice>");
        PieSlice out;
        for (const auto& [attr, value] : slice.attrs) {
            if (attr != "source_iri") malformed(slice.line, "unknown attribute " + attr);
            out.source_iri = value;
        }
        const XmlNode* name = nullptr;
        const XmlNode* percent = nullptr;
        for (const auto& child : slice.children) {
            const XmlNode** target = child.name == "name" ? &name : child.name == "percent" ? &percent : nullptr;
            if (!target) malformed(child.line, "unexpected element <" + child.name + "> in <slice>");
            if (*target) malformed(child.line, "duplicate <" + child.name + "> in <slice>");
            if (!child.children.empty()) malformed(child.line, "<" + child.name + "> must contain text only");
            *target = &child;
        }
        if (!name) malformed(slice.line, "<slice> is missing <name>");
        if (!percent) malformed(slice.line, "<slice> is missing <percent>");
        out.name = name->text;
        if (out.name.empty()) malformed(name->line, "<name> must not be empty");
        out.hundredths = parse_percent(percent->text, percent->line);
        doc.slices.push_back(std::move(out));
    }
    return doc;
}

std::string format_hundredths(std::int64_t hundredths) {
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(frac.begin(), '0');
    return std::to_string(hundredths / 100) + "." + frac;
}

std::string export_pie_document(const PieDocument& doc) {
    if (doc.slices.empty()) return "<piechart/>\n";
    std::string out = "<piechart>\n";
    for (const auto& s : doc.slices) {
        out += "  <slice";
        if (s.source_iri) out += " source_iri=\"" + escape_xml(*s.source_iri) + "\"";
        out += ">\n";
        out += "    <name>" + escape_xml(s.name) + "</name>\n";
        out += "    <percent>" + format_hundredths(s.hundredths) + "</percent>\n";
        out += "  </slice>\n";
    }
    out += "</piechart>\n";
    return out;
}

PieDocument document_from_model(const PieModel& model) {
    PieDocument doc;
    for (const auto& c : model.root.children) {
        PieSlice s;
        s.name = c.label;
        s.hundredths = std::llround(c.percent * 100.0);
        if (!c.source_iri.empty()) s.source_iri = c.source_iri;
        doc.slices.push_back(std::move(s));
    }
    return doc;
}

std::string export_pie_document(const PieModel& model) { return export_pie_document(document_from_model(model)); }

nlohmann::json to_json(const PieDocument& doc) {
    nlohmann::json slices = nlohmann::json::array();
    for (const auto& s : doc.slices) {
        nlohmann::json j{{"name", s.name}, {"percent", format_hundredths(s.hundredths)}};
        if (s.source_iri) j["source_iri"] = *s.source_iri;
        slices.push_back(std::move(j));
    }
    return {{"slices", std::move(slices)}};
}

PieDocument pie_document_from_json(const nlohmann::json& j) {
    PieDocument doc;
    for (const auto& s : j.at("slices")) {
        PieSlice slice;
        slice.name = s.at("name").get<std::string>();
        slice.hundredths = parse_percent(s.at("percent").get<std::string>(), 0);
        if (s.contains("source_iri")) slice.source_iri = s["source_iri"].get<std::string>();
        doc.slices.push_back(std::move(slice));
    }
    return doc;
}

} // namespace fdkb
