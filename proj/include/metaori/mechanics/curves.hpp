#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "../error.hpp"

namespace metaori::mechanics {

enum class CurveRole { Metashell, Origami, Combined };

inline const char* to_string(CurveRole r)
{
    switch (r) {
    case CurveRole::Metashell: return "F_meta";
    case CurveRole::Origami: return "F_ori";
    case CurveRole::Combined: return "F_el";
    }
    return "?";
}

struct FDCurve {
    CurveRole role = CurveRole::Metashell;
    std::vector<double> d;  // mm
    std::vector<double> F;  // N

    std::size_t size() const { return d.size(); }
    double lo() const { return d.front(); }
    double hi() const { return d.back(); }

    // Linear interpolation, clamped to the ends.
    double at(double x) const
    {
        if (x <= d.front()) return F.front();
        if (x >= d.back()) return F.back();
        auto it = std::upper_bound(d.begin(), d.end(), x);
        std::size_t i = static_cast<std::size_t>(it - d.begin());
        double s = (x - d[i - 1]) / (d[i] - d[i - 1]);
        return F[i - 1] + s * (F[i] - F[i - 1]);
    }
};

struct Event {
    enum Type { Maximum, Minimum } type;
    std::string branch;  // "inflation" at maxima, "deflation" at minima
    double x = 0, y = 0;
    std::size_t index = 0;
};

struct EventList {
    std::vector<Event> events;
    bool bistable = false;
    std::size_t maxima() const
    {
        return static_cast<std::size_t>(std::count_if(events.begin(), events.end(),
                                                      [](const Event& e) { return e.type == Event::Maximum; }));
    }
    std::size_t minima() const { return events.size() - maxima(); }
};

struct PVCurve {
    std::vector<double> V;  // mL
    std::vector<double> P;  // mbar
    std::vector<double> d;  // mm, the parameter the curve was traced in
    EventList events;

    std::size_t size() const { return V.size(); }
};

inline void check_increasing(const std::vector<double>& x, const char* what)
{
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            fail(ErrorKind::InvariantError, std::string(what) + " is not strictly increasing at sample " + std::to_string(i));
}

// Adjacent jumps bounded by 5x the local secant slope times the step.
inline bool is_continuous(const FDCurve& c)
{
    const std::size_t n = c.size();
    if (n < 3) return true;
    for (std::size_t i = 1; i < n; ++i) {
        double step = c.d[i] - c.d[i - 1];
        double jump = std::abs(c.F[i] - c.F[i - 1]);
        double slope = 0;
        if (i >= 2) slope = std::max(slope, std::abs(c.F[i - 1] - c.F[i - 2]) / (c.d[i - 1] - c.d[i - 2]));
        if (i + 1 < n) slope = std::max(slope, std::abs(c.F[i + 1] - c.F[i]) / (c.d[i + 1] - c.d[i]));
        if (jump > 5.0 * slope * step + 1e-12) return false;
    }
    return true;
}

inline EventList detect_events(const std::vector<double>& x, const std::vector<double>& y, double noise = 1e-6)
{
    EventList out;
    const std::size_t n = y.size();
    if (n < 3) return out;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.events.push_back({Event::Maximum, "inflation", x[i], y[i], i});
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) out.events.push_back({Event::Minimum, "deflation", x[i], y[i], i});
    }
    bool neg = false, pos_before = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] > noise && !neg) pos_before = true;
        if (y[i] < -noise && pos_before) neg = true;
    }
    out.bistable = neg;
    return out;
}

inline EventList detect_events(const FDCurve& c) { return detect_events(c.d, c.F); }
inline EventList detect_events(const PVCurve& c) { return detect_events(c.V, c.P); }

// Sign changes of F, counting the rest state at the first sample as one crossing.
inline std::vector<double> zero_crossings(const FDCurve& c, double noise = 1e-9)
{
    std::vector<double> z;
    if (c.size() == 0) return z;
    if (std::abs(c.F.front()) <= noise) z.push_back(c.d.front());
    int last = 0;
    double last_x = c.d.front(), last_f = c.F.front();
    for (std::size_t i = 0; i < c.size(); ++i) {
        int s = c.F[i] > noise ? 1 : (c.F[i] < -noise ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) {
            double t = last_f / (last_f - c.F[i]);
            z.push_back(last_x + t * (c.d[i] - last_x));
        }
        last = s;
        last_x = c.d[i];
        last_f = c.F[i];
    }
    return z;
}

// Pointwise sum on the union of both grids restricted to the overlap.
inline FDCurve combined_fd(const FDCurve& meta, const FDCurve& ori)
{
    require(meta.size() >= 2 && ori.size() >= 2, ErrorKind::DomainMismatch, "curves need at least two samples");
    double lo = std::max(meta.lo(), ori.lo()), hi = std::min(meta.hi(), ori.hi());
    if (!(hi > lo)) fail(ErrorKind::DomainMismatch, "displacement domains do not overlap");
    std::vector<double> g;
    for (const FDCurve* c : {&meta, &ori})
        for (double x : c->d)
            if (x >= lo && x <= hi) g.push_back(x);
    g.push_back(lo);
    g.push_back(hi);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1 + std::abs(a)); }),
            g.end());
    FDCurve out;
    out.role = CurveRole::Combined;
    out.d = g;
    for (double x : g) out.F.push_back(meta.at(x) + ori.at(x));
    return out;
}

inline std::string format_sig(double v, int digits = 9)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string to_csv(const FDCurve& c)
{
    std::ostringstream os;
    os << "d_mm,F_N\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << format_sig(c.d[i]) << ',' << format_sig(c.F[i]) << '\n';
    return os.str();
}

inline std::string to_csv(const PVCurve& c)
{
    std::ostringstream os;
    os << "V_mL,P_mbar\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << format_sig(c.V[i]) << ',' << format_sig(c.P[i]) << '\n';
    return os.str();
}

inline std::string events_to_csv(const EventList& e)
{
    std::ostringstream os;
    os << "type,branch,V_mL,P_mbar\n";
    for (const Event& ev : e.events)
        os << (ev.type == Event::Maximum ? "max" : "min") << ',' << ev.branch << ',' << format_sig(ev.x) << ','
           << format_sig(ev.y) << '\n';
    return os.str();
}

// Two-column CSV with a fixed header.
inline std::vector<std::pair<double, double>> parse_csv2(const std::string& text, const std::string& header)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::ParseError, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) fail(ErrorKind::ParseError, "expected header '" + header + "', got '" + line + "'");
    std::vector<std::pair<double, double>> rows;
    int n = 1;
    while (std::getline(is, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorKind::ParseError, "line " + std::to_string(n) + ": missing comma");
        try {
            std::size_t a = 0, b = 0;
            double x = std::stod(line.substr(0, comma), &a);
            double y = std::stod(line.substr(comma + 1), &b);
            if (a != comma || b != line.size() - comma - 1) throw std::invalid_argument("trailing");
            rows.emplace_back(x, y);
        } catch (const std::exception&) {
            fail(ErrorKind::ParseError, "line " + std::to_string(n) + ": not two numbers");
        }
    }
    return rows;
}

inline FDCurve fd_from_csv(const std::string& text, CurveRole role = CurveRole::Combined)
{
    FDCurve c;
    c.role = role;
    for (auto [x, y] : parse_csv2(text, "d_mm,F_N")) {
        c.d.push_back(x);
        c.F.push_back(y);
    }
    return c;
}

} // namespace metaori::mechanics
