#include "pathquery/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace pathquery {

std::string_view type_name(Type t) {
    switch (t) {
        case Type::Bool: return "Bool";
        case Type::Int: return "Int";
        case Type::Double: return "Double";
        case Type::DateTime: return "DateTime";
        case Type::Duration: return "Duration";
        case Type::String: return "String";
        case Type::Text: return "Text";
        case Type::Id: return "Id";
        case Type::Record: return "Record";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// DateTime

namespace {

// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
    throw std::invalid_argument(std::string(what) + " '" + std::string(text) + "'");
}

// Reads exactly `width` decimal digits at `pos`.
int digits(std::string_view s, std::size_t& pos, std::size_t width, std::string_view whole, std::string_view what) {
    if (pos + width > s.size()) bad(what, whole);
    int v = 0;
    for (std::size_t i = 0; i < width; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') bad(what, whole);
        v = v * 10 + (c - '0');
    }
    pos += width;
    return v;
}

void expect(std::string_view s, std::size_t& pos, char c, std::string_view whole, std::string_view what) {
    if (pos >= s.size() || s[pos] != c) bad(what, whole);
    ++pos;
}

}  // namespace

std::int64_t DateTime::instant() const {
    std::int64_t secs = 0;
    if (date) secs += days_from_civil(date->year, date->month, date->day) * 86400;
    if (time) secs += time->hour * 3600 + time->minute * 60 + time->second;
    if (offset_minutes) secs -= static_cast<std::int64_t>(*offset_minutes) * 60;
    return secs;
}

DateTime DateTime::parse(std::string_view iso) {
    constexpr std::string_view kWhat = "malformed DateTime";
    DateTime dt;
    std::size_t pos = 0;
    if (iso.empty()) bad(kWhat, iso);
    if (iso[0] != 'T') {
        CivilDate d;
        d.year = digits(iso, pos, 4, iso, kWhat);
        expect(iso, pos, '-', iso, kWhat);
        d.month = digits(iso, pos, 2, iso, kWhat);
        expect(iso, pos, '-', iso, kWhat);
        d.day = digits(iso, pos, 2, iso, kWhat);
        if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) bad(kWhat, iso);
        dt.date = d;
    }
    if (pos < iso.size()) {
        expect(iso, pos, 'T', iso, kWhat);
        CivilTime t;
        t.hour = digits(iso, pos, 2, iso, kWhat);
        expect(iso, pos, ':', iso, kWhat);
        t.minute = digits(iso, pos, 2, iso, kWhat);
        if (pos < iso.size() && iso[pos] == ':') {
            ++pos;
            t.second = digits(iso, pos, 2, iso, kWhat);
        }
        if (pos < iso.size() && (iso[pos] == '.' || iso[pos] == ',')) bad("DateTime has subseconds", iso);
        if (t.hour > 23 || t.minute > 59 || t.second > 59) bad(kWhat, iso);
        dt.time = t;
        if (pos < iso.size()) {
            if (iso[pos] == 'Z') {
                ++pos;
                dt.offset_minutes = 0;
            } else if (iso[pos] == '+' || iso[pos] == '-') {
                int sign = iso[pos] == '-' ? -1 : 1;
                ++pos;
                int oh = digits(iso, pos, 2, iso, kWhat);
                expect(iso, pos, ':', iso, kWhat);
                int om = digits(iso, pos, 2, iso, kWhat);
                if (oh > 23 || om > 59) bad(kWhat, iso);
                dt.offset_minutes = sign * (oh * 60 + om);
            }
        }
    }
    if (pos != iso.size() || (!dt.date && !dt.time)) bad(kWhat, iso);
    return dt;
}

std::string DateTime::iso() const {
    char buf[64];
    std::string out;
    if (date) {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date->year, date->month, date->day);
        out += buf;
    }
    if (time) {
        if (!date && time->second == 0) {
            std::snprintf(buf, sizeof buf, "T%02d:%02d", time->hour, time->minute);
        } else {
            std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", time->hour, time->minute, time->second);
        }
        out += buf;
    }
    if (offset_minutes) {
        int off = *offset_minutes;
        if (off == 0) {
            out += 'Z';
        } else {
            char sign = off < 0 ? '-' : '+';
            off = off < 0 ? -off : off;
            std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, off / 60, off % 60);
            out += buf;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Duration

Duration Duration::parse(std::string_view iso) {
    constexpr std::string_view kWhat = "malformed Duration";
    std::size_t pos = 0;
    bool negative = false;
    if (pos < iso.size() && (iso[pos] == '-' || iso[pos] == '+')) {
        negative = iso[pos] == '-';
        ++pos;
    }
    expect(iso, pos, 'P', iso, kWhat);
    std::int64_t total = 0;
    bool any = false;
    bool in_time = false;
    // Units must appear in order D, then (after T) H, M, S.
    int last_rank = -1;
    while (pos < iso.size()) {
        if (iso[pos] == 'T') {
            if (in_time) bad(kWhat, iso);
            in_time = true;
            ++pos;
            if (pos == iso.size()) bad(kWhat, iso);
            continue;
        }
        std::int64_t n = 0;
        auto [ptr, ec] = std::from_chars(iso.data() + pos, iso.data() + iso.size(), n);
        if (ec != std::errc() || ptr == iso.data() + pos) bad(kWhat, iso);
        pos = static_cast<std::size_t>(ptr - iso.data());
        if (pos >= iso.size()) bad(kWhat, iso);
        char unit = iso[pos++];
        if (unit == '.' || unit == ',') bad("Duration has fractional seconds", iso);
        std::int64_t scale = 0;
        int rank = 0;
        if (!in_time) {
            if (unit == 'Y' || unit == 'W' || unit == 'M') bad("Duration with years, months or weeks", iso);
            if (unit != 'D') bad(kWhat, iso);
            scale = 86'400'000;
            rank = 0;
        } else {
            switch (unit) {
                case 'H': scale = 3'600'000; rank = 1; break;
                case 'M': scale = 60'000; rank = 2; break;
                case 'S': scale = 1'000; rank = 3; break;
                default: bad(kWhat, iso);
            }
        }
        if (rank <= last_rank) bad(kWhat, iso);
        last_rank = rank;
        std::int64_t part = 0;
        if (__builtin_mul_overflow(n, scale, &part) || __builtin_add_overflow(total, part, &total)) {
            bad("Duration out of range", iso);
        }
        any = true;
    }
    if (!any) bad(kWhat, iso);
    return Duration{negative ? -total : total};
}

std::string Duration::iso() const {
    if (millis == 0) return "PT0S";
    std::string out = millis < 0 ? "-P" : "P";
    // Magnitude as unsigned to survive INT64_MIN.
    std::uint64_t ms = millis < 0 ? 0 - static_cast<std::uint64_t>(millis) : static_cast<std::uint64_t>(millis);
    std::uint64_t days = ms / 86'400'000;
    ms %= 86'400'000;
    std::uint64_t hours = ms / 3'600'000;
    ms %= 3'600'000;
    std::uint64_t minutes = ms / 60'000;
    ms %= 60'000;
    std::uint64_t seconds = ms / 1000;
    ms %= 1000;
    if (days) out += std::to_string(days) + "D";
    if (hours || minutes || seconds || ms) {
        out += "T";
        if (hours) out += std::to_string(hours) + "H";
        if (minutes) out += std::to_string(minutes) + "M";
        if (seconds || ms) {
            out += std::to_string(seconds);
            if (ms) {
                char buf[8];
                std::snprintf(buf, sizeof buf, ".%03u", static_cast<unsigned>(ms));
                out += buf;
            }
            out += "S";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Record

Record::Record(std::vector<Field> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].second.empty()) {
            throw std::invalid_argument("record field '" + fields[i].first + "' has no values");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (fields[j].first == fields[i].first) {
                throw std::invalid_argument("duplicate record field '" + fields[i].first + "'");
            }
        }
    }
    if (fields.empty()) throw std::invalid_argument("record has no fields");
    fields_ = std::make_shared<const std::vector<Field>>(std::move(fields));
}

std::span<const Record::Field> Record::fields() const { return *fields_; }

std::size_t Record::size() const { return fields_->size(); }

const std::vector<Value>* Record::find(std::string_view name) const {
    for (const auto& f : *fields_) {
        if (f.first == name) return &f.second;
    }
    return nullptr;
}

void RecordBuilder::add(std::string_view name, Value v) {
    for (auto& f : fields_) {
        if (f.first == name) {
            f.second.push_back(std::move(v));
            return;
        }
    }
    fields_.emplace_back(std::string(name), std::vector<Value>{std::move(v)});
}

void RecordBuilder::merge(const Record& r) {
    for (const auto& [name, values] : r.fields()) {
        for (const auto& v : values) add(name, v);
    }
}

Record RecordBuilder::build() && { return Record(std::move(fields_)); }

// ---------------------------------------------------------------------------
// Equality and ordering

double Value::as_number() const {
    return is(Type::Int) ? static_cast<double>(as_int()) : as_double();
}

namespace {

int rank(Type t) {
    switch (t) {
        case Type::Bool: return 0;
        case Type::Int:
        case Type::Double: return 1;
        case Type::DateTime: return 2;
        case Type::Duration: return 3;
        case Type::String: return 4;
        case Type::Text: return 5;
        case Type::Id: return 6;
        case Type::Record: return 7;
    }
    return 8;
}

std::weak_ordering compare_doubles(double a, double b) {
    bool an = std::isnan(a), bn = std::isnan(b);
    if (an || bn) {
        if (an && bn) return std::weak_ordering::equivalent;
        return an ? std::weak_ordering::greater : std::weak_ordering::less;
    }
    if (a < b) return std::weak_ordering::less;
    if (a > b) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

// Exact comparison without rounding the integer through double.
std::weak_ordering compare_int_double(std::int64_t i, double d) {
    if (std::isnan(d)) return std::weak_ordering::less;
    constexpr double kTwo63 = 9223372036854775808.0;
    if (d >= kTwo63) return std::weak_ordering::less;
    if (d < -kTwo63) return std::weak_ordering::greater;
    double whole = std::trunc(d);
    auto wi = static_cast<std::int64_t>(whole);
    if (i < wi) return std::weak_ordering::less;
    if (i > wi) return std::weak_ordering::greater;
    double frac = d - whole;
    if (frac > 0) return std::weak_ordering::less;
    if (frac < 0) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
}

std::weak_ordering compare_numbers(const Value& a, const Value& b) {
    if (a.is(Type::Int) && b.is(Type::Int)) return a.as_int() <=> b.as_int();
    if (a.is(Type::Double) && b.is(Type::Double)) return compare_doubles(a.as_double(), b.as_double());
    if (a.is(Type::Int)) return compare_int_double(a.as_int(), b.as_double());
    return 0 <=> compare_int_double(b.as_int(), a.as_double());
}

std::weak_ordering compare_strings(const std::string& a, const std::string& b) {
    int c = a.compare(b);  // bytewise, which is code point order for UTF-8
    return c < 0 ? std::weak_ordering::less : c > 0 ? std::weak_ordering::greater : std::weak_ordering::equivalent;
}

std::weak_ordering compare_date_times(const DateTime& a, const DateTime& b) {
    if (auto c = a.date.has_value() <=> b.date.has_value(); c != 0) return c;
    if (auto c = a.time.has_value() <=> b.time.has_value(); c != 0) return c;
    if (auto c = a.instant() <=> b.instant(); c != 0) return c;
    if (auto c = a.offset_minutes.has_value() <=> b.offset_minutes.has_value(); c != 0) return c;
    return a.offset_minutes.value_or(0) <=> b.offset_minutes.value_or(0);
}

}  // namespace

std::weak_ordering compare(const Value& a, const Value& b) {
    int ra = rank(a.type()), rb = rank(b.type());
    if (ra != rb) return ra <=> rb;
    switch (a.type()) {
        case Type::Bool: return a.as_bool() <=> b.as_bool();
        case Type::Int:
        case Type::Double: return compare_numbers(a, b);
        case Type::DateTime: return compare_date_times(a.as_date_time(), b.as_date_time());
        case Type::Duration: return a.as_duration().millis <=> b.as_duration().millis;
        case Type::String: return compare_strings(a.as_string(), b.as_string());
        case Type::Text: {
            if (auto c = compare_strings(a.as_text().text, b.as_text().text); c != 0) return c;
            return compare_strings(a.as_text().lang, b.as_text().lang);
        }
        case Type::Id: return compare_strings(a.as_id(), b.as_id());
        case Type::Record: return std::weak_ordering::equivalent;
    }
    return std::weak_ordering::equivalent;
}

bool equals(const Value& a, const Value& b) {
    if ((a.is(Type::Double) && std::isnan(a.as_double())) || (b.is(Type::Double) && std::isnan(b.as_double()))) {
        return false;
    }
    if (a.is_numeric() && b.is_numeric()) return compare_numbers(a, b) == 0;
    if (a.type() != b.type()) return false;
    if (a.is_record()) {
        auto fa = a.as_record().fields();
        auto fb = b.as_record().fields();
        if (fa.size() != fb.size()) return false;
        for (std::size_t i = 0; i < fa.size(); ++i) {
            if (fa[i].first != fb[i].first || fa[i].second.size() != fb[i].second.size()) return false;
            for (std::size_t j = 0; j < fa[i].second.size(); ++j) {
                if (!equals(fa[i].second[j], fb[i].second[j])) return false;
            }
        }
        return true;
    }
    return compare(a, b) == 0;
}

bool is_truthy(const Value& v) { return !(v.is(Type::Bool) && !v.as_bool()); }

// ---------------------------------------------------------------------------
// Rendering

std::string quote_string(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '\'';
    return out;
}

namespace {

std::string render_double(double d) {
    if (std::isnan(d)) return "Double('nan')";
    if (std::isinf(d)) return d > 0 ? "Double('inf')" : "Double('-inf')";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

}  // namespace

std::string render_literal(const Value& v, int indent) {
    switch (v.type()) {
        case Type::Bool: return v.as_bool() ? "true" : "false";
        case Type::Int: return std::to_string(v.as_int());
        case Type::Double: return render_double(v.as_double());
        case Type::DateTime: return "DateTime(" + quote_string(v.as_date_time().iso()) + ")";
        case Type::Duration: return "Duration(" + quote_string(v.as_duration().iso()) + ")";
        case Type::String: return quote_string(v.as_string());
        case Type::Text: return "Text(" + quote_string(v.as_text().text) + ", " + quote_string(v.as_text().lang) + ")";
        case Type::Id: return "Id(" + quote_string(v.as_id()) + ")";
        case Type::Record: {
            std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
            std::string out = "{\n";
            for (const auto& [name, values] : v.as_record().fields()) {
                for (const auto& fv : values) {
                    out += pad + name + ": " + render_literal(fv, indent + 2) + "\n";
                }
            }
            out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
            return out;
        }
    }
    return {};
}

}  // namespace pathquery
