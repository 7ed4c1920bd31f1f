#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace pathquery {

class Value;

// The nine value types. The enumerator order is the cross-type rank used by
// `compare`, except that Int and Double share one numeric rank.
enum class Type { Bool, Int, Double, DateTime, Duration, String, Text, Id, Record };

std::string_view type_name(Type t);

struct CivilDate {
    int year = 1970;
    int month = 1;
    int day = 1;
};

struct CivilTime {
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// ISO 8601 date-time without subseconds. At least one of date/time is set.
// A UTC offset is only meaningful together with a time part.
struct DateTime {
    std::optional<CivilDate> date;
    std::optional<CivilTime> time;
    std::optional<int> offset_minutes;

    // Seconds since 1970-01-01T00:00:00Z, treating a missing date as the
    // epoch day, a missing time as midnight and a missing offset as UTC.
    std::int64_t instant() const;

    static DateTime parse(std::string_view iso);  // throws std::invalid_argument
    std::string iso() const;
};

// Signed millisecond span. Years, months and weeks are not representable.
struct Duration {
    std::int64_t millis = 0;

    static Duration parse(std::string_view iso);  // throws std::invalid_argument
    std::string iso() const;
};

struct Text {
    std::string text;
    std::string lang;
};

// Immutable record: ordered fields, each name appearing once and mapping to a
// non-empty list of values. Cheap to copy.
class Record {
public:
    using Field = std::pair<std::string, std::vector<Value>>;

    explicit Record(std::vector<Field> fields);  // throws std::invalid_argument

    std::span<const Field> fields() const;
    const std::vector<Value>* find(std::string_view name) const;
    std::size_t size() const;

private:
    std::shared_ptr<const std::vector<Field>> fields_;
};

class Value {
    struct StringTag { std::string s; };
    struct IdTag { std::string s; };
    using Storage = std::variant<bool, std::int64_t, double, DateTime, Duration, StringTag, Text, IdTag, Record>;

public:
    Value() : v_(false) {}

    static Value boolean(bool b) { return Value(Storage(b)); }
    static Value integer(std::int64_t i) { return Value(Storage(i)); }
    static Value real(double d) { return Value(Storage(d)); }
    static Value string(std::string s) { return Value(Storage(StringTag{std::move(s)})); }
    static Value text(std::string s, std::string lang) { return Value(Storage(Text{std::move(s), std::move(lang)})); }
    static Value id(std::string s) { return Value(Storage(IdTag{std::move(s)})); }
    static Value date_time(DateTime dt) { return Value(Storage(std::move(dt))); }
    static Value duration(Duration d) { return Value(Storage(d)); }
    static Value record(Record r) { return Value(Storage(std::move(r))); }

    Type type() const { return static_cast<Type>(v_.index()); }
    bool is(Type t) const { return type() == t; }
    bool is_numeric() const { return is(Type::Int) || is(Type::Double); }
    bool is_record() const { return is(Type::Record); }

    bool as_bool() const { return std::get<bool>(v_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    double as_double() const { return std::get<double>(v_); }
    // Int or Double widened to double.
    double as_number() const;
    const std::string& as_string() const { return std::get<StringTag>(v_).s; }
    const Text& as_text() const { return std::get<Text>(v_); }
    const std::string& as_id() const { return std::get<IdTag>(v_).s; }
    const DateTime& as_date_time() const { return std::get<DateTime>(v_); }
    const Duration& as_duration() const { return std::get<Duration>(v_); }
    const Record& as_record() const { return std::get<Record>(v_); }

private:
    explicit Value(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

// Accumulates field values; repeated names append to the existing field.
class RecordBuilder {
public:
    void add(std::string_view name, Value v);
    void merge(const Record& r);
    bool empty() const { return fields_.empty(); }
    Record build() &&;

private:
    std::vector<Record::Field> fields_;
};

// Equality: Int and Double compare numerically, Text compares string and
// tag, Records compare structurally, NaN equals nothing. Otherwise values of
// different types are never equal.
bool equals(const Value& a, const Value& b);

// Nearly total order: Bool < numeric < DateTime < Duration < String < Text
// < Id < Record. All records are equivalent; NaN sorts after +inf.
std::weak_ordering compare(const Value& a, const Value& b);

struct ValueLess {
    bool operator()(const Value& a, const Value& b) const { return compare(a, b) < 0; }
};

// Only Bool false is falsy.
bool is_truthy(const Value& v);

// Literal syntax. Records span multiple lines, nested fields indented by two
// spaces per level starting at `indent`.
std::string render_literal(const Value& v, int indent = 0);

// Quoted form of a string literal, single quotes preferred.
std::string quote_string(std::string_view s);

}  // namespace pathquery
