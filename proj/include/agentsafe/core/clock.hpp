#pragma once

#include <cctype>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "agentsafe/core/error.hpp"

namespace agentsafe {

/// Time of day, minutes since midnight in [0, 1440).
struct ClockTime {
  int minutes = 0;

  static constexpr int kDay = 24 * 60;

  static ClockTime of(int hour, int minute = 0) {
    return ClockTime{(((hour * 60 + minute) % kDay) + kDay) % kDay};
  }

  int hour() const { return minutes / 60; }
  int minute() const { return minutes % 60; }

  ClockTime plus_minutes(long long delta) const {
    const long long m = ((minutes + delta) % kDay + kDay) % kDay;
    return ClockTime{static_cast<int>(m)};
  }

  std::string str() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", hour(), minute());
    return buf;
  }

  auto operator<=>(const ClockTime&) const = default;

  /// Accepts "19:00", "7:00 PM", "7 pm", "07:30am".
  static ClockTime parse(std::string_view text) {
    auto fail = [&] { return Error(ErrorCode::SpecParseError, "bad clock time '" + std::string(text) + "'"); };
    std::size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_int = [&](int max_digits) {
      int v = 0, digits = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) && digits < max_digits) {
        v = v * 10 + (text[i] - '0');
        ++i;
        ++digits;
      }
      if (digits == 0) throw fail();
      return v;
    };
    skip_ws();
    int hour = read_int(2);
    int minute = 0;
    if (i < text.size() && text[i] == ':') {
      ++i;
      minute = read_int(2);
    }
    skip_ws();
    if (i < text.size()) {
      std::string suffix;
      for (; i < text.size(); ++i) {
        if (text[i] == '.' || std::isspace(static_cast<unsigned char>(text[i]))) continue;
        suffix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
      }
      if (suffix == "pm" || suffix == "am") {
        if (hour < 1 || hour > 12) throw fail();
        hour %= 12;
        if (suffix == "pm") hour += 12;
      } else {
        throw fail();
      }
    }
    if (hour > 23 || minute > 59) throw fail();
    return of(hour, minute);
  }
};

/// Scenario window on whole hours; may wrap past midnight. Hour labels are
/// inclusive of both endpoints, so 19:00-05:00 yields 11 labels.
struct TimeWindow {
  ClockTime start = ClockTime::of(19);
  ClockTime end = ClockTime::of(5);

  static TimeWindow evening() { return {}; }

  int length_minutes() const {
    return ((end.minutes - start.minutes) % ClockTime::kDay + ClockTime::kDay) % ClockTime::kDay;
  }

  int slot_count() const { return length_minutes() / 60 + 1; }

  std::vector<ClockTime> hour_labels() const {
    std::vector<ClockTime> labels;
    for (int k = 0; k < slot_count(); ++k) labels.push_back(start.plus_minutes(60LL * k));
    return labels;
  }

  // Minutes from start, or -1 when outside the window.
  int offset_of(ClockTime t) const {
    const int off = ((t.minutes - start.minutes) % ClockTime::kDay + ClockTime::kDay) % ClockTime::kDay;
    return off <= length_minutes() ? off : -1;
  }

  bool contains(ClockTime t) const { return offset_of(t) >= 0; }

  bool is_label(ClockTime t) const {
    const int off = offset_of(t);
    return off >= 0 && off % 60 == 0;
  }

  void validate() const {
    if (start.minute() != 0 || end.minute() != 0)
      throw Error(ErrorCode::ConfigError, "window endpoints must be whole hours: " + str());
    if (length_minutes() == 0) throw Error(ErrorCode::ConfigError, "window has zero length: " + str());
  }

  std::string str() const { return start.str() + "-" + end.str(); }

  static TimeWindow parse(std::string_view text) {
    const auto dash = text.find('-');
    if (dash == std::string_view::npos)
      throw Error(ErrorCode::ConfigError, "window must look like 19:00-05:00, got '" + std::string(text) + "'");
    TimeWindow w{ClockTime::parse(text.substr(0, dash)), ClockTime::parse(text.substr(dash + 1))};
    w.validate();
    return w;
  }

  bool operator==(const TimeWindow&) const = default;
};

}  // namespace agentsafe
