// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>

namespace visrecon {

// sRGB components as fractions in [0,1].
struct RGBColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

// CIELAB under D65/2deg. L in [0,100] for in-gamut sRGB; a,b unbounded.
struct LabColor {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// Cylindrical form of Lab. h in degrees, [0,360); h = 0 when C = 0.
struct LchColor {
    double L = 0.0;
    double C = 0.0;
    double h = 0.0;
};

enum class ColorMetric { DE1976, DE2000, AB_PLANE, HUE_ABS };

namespace detail {

inline double srgb_channel_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_channel_to_srgb(double c) {
    return c <= 0.0031308 ? c * 12.92 : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

constexpr double kPi = 3.14159265358979323846;

inline double pow7(double x) {
    const double x2 = x * x;
    return x2 * x2 * x2 * x;
}

}  // namespace detail

struct LinearRGB {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

inline LinearRGB srgb_to_linear(RGBColor c) {
    return {detail::srgb_channel_to_linear(c.r),
            detail::srgb_channel_to_linear(c.g),
            detail::srgb_channel_to_linear(c.b)};
}

inline RGBColor linear_to_srgb(LinearRGB c) {
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return {clamp01(detail::linear_channel_to_srgb(c.r)),
            clamp01(detail::linear_channel_to_srgb(c.g)),
            clamp01(detail::linear_channel_to_srgb(c.b))};
}

// sRGB -> XYZ(D65) -> Lab. Matrix and white point per IEC 61966-2-1 with
// the usual 7-digit coefficients.
inline LabColor srgb_to_lab(RGBColor c) {
    const LinearRGB lin = srgb_to_linear(c);
    const double X = 0.4124564 * lin.r + 0.3575761 * lin.g + 0.1804375 * lin.b;
    const double Y = 0.2126729 * lin.r + 0.7151522 * lin.g + 0.0721750 * lin.b;
    const double Z = 0.0193339 * lin.r + 0.1191920 * lin.g + 0.9503041 * lin.b;
    constexpr double Xn = 0.95047, Yn = 1.0, Zn = 1.08883;
    const double fx = detail::lab_f(X / Xn);
    const double fy = detail::lab_f(Y / Yn);
    const double fz = detail::lab_f(Z / Zn);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

inline LchColor lab_to_lch(LabColor c) {
    const double C = std::hypot(c.a, c.b);
    if (C == 0.0) return {c.L, 0.0, 0.0};
    double h = std::atan2(c.b, c.a) * 180.0 / detail::kPi;
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h = 0.0;
    return {c.L, C, h};
}

// Wrap-around distance between hue angles in degrees; result in [0,180].
inline double hue_distance_deg(double h1, double h2) {
    double d = std::fabs(h1 - h2);
    if (d > 360.0) d = std::fmod(d, 360.0);
    return std::min(d, 360.0 - d);
}

inline double delta_e_1976(LabColor x, LabColor y) {
    const double dL = x.L - y.L, da = x.a - y.a, db = x.b - y.b;
    return std::sqrt(dL * dL + da * da + db * db);
}

// CIEDE2000 with kL = kC = kH = 1 (Sharma, Wu & Dalal formulation).
inline double delta_e_2000(LabColor x, LabColor y) {
    using detail::kPi;
    using detail::pow7;
    constexpr double kRad = kPi / 180.0;
    constexpr double kDeg = 180.0 / kPi;

    const double C1 = std::hypot(x.a, x.b);
    const double C2 = std::hypot(y.a, y.b);
    const double Cbar = 0.5 * (C1 + C2);
    const double Cbar7 = pow7(Cbar);
    const double G = 0.5 * (1.0 - std::sqrt(Cbar7 / (Cbar7 + pow7(25.0))));

    const double a1p = (1.0 + G) * x.a;
    const double a2p = (1.0 + G) * y.a;
    const double C1p = std::hypot(a1p, x.b);
    const double C2p = std::hypot(a2p, y.b);

    auto hue_of = [&](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, ap) * kDeg;
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue_of(a1p, x.b);
    const double h2p = hue_of(a2p, y.b);

    const double dLp = y.L - x.L;
    const double dCp = C2p - C1p;

    double dhp = 0.0;
    if (C1p * C2p != 0.0) {
        dhp = h2p - h1p;
        if (dhp > 180.0) dhp -= 360.0;
        else if (dhp < -180.0) dhp += 360.0;
    }
    const double dHp = 2.0 * std::sqrt(C1p * C2p) * std::sin(0.5 * dhp * kRad);

    const double Lbp = 0.5 * (x.L + y.L);
    const double Cbp = 0.5 * (C1p + C2p);

    double hbp = h1p + h2p;
    if (C1p * C2p != 0.0) {
        if (std::fabs(h1p - h2p) <= 180.0) hbp = 0.5 * (h1p + h2p);
        else if (h1p + h2p < 360.0) hbp = 0.5 * (h1p + h2p + 360.0);
        else hbp = 0.5 * (h1p + h2p - 360.0);
    }

    const double T = 1.0 - 0.17 * std::cos((hbp - 30.0) * kRad) +
                     0.24 * std::cos(2.0 * hbp * kRad) +
                     0.32 * std::cos((3.0 * hbp + 6.0) * kRad) -
                     0.20 * std::cos((4.0 * hbp - 63.0) * kRad);
    const double dTheta = 30.0 * std::exp(-((hbp - 275.0) / 25.0) * ((hbp - 275.0) / 25.0));
    const double Cbp7 = pow7(Cbp);
    const double RC = 2.0 * std::sqrt(Cbp7 / (Cbp7 + pow7(25.0)));
    const double SL = 1.0 + 0.015 * (Lbp - 50.0) * (Lbp - 50.0) /
                                std::sqrt(20.0 + (Lbp - 50.0) * (Lbp - 50.0));
    const double SC = 1.0 + 0.045 * Cbp;
    const double SH = 1.0 + 0.015 * Cbp * T;
    const double RT = -std::sin(2.0 * dTheta * kRad) * RC;

    const double tL = dLp / SL;
    const double tC = dCp / SC;
    const double tH = dHp / SH;
    return std::sqrt(tL * tL + tC * tC + tH * tH + RT * tC * tH);
}

// Euclidean distance restricted to the ab plane (chromaticity only).
inline double ab_plane_distance(LabColor x, LabColor y) {
    return std::hypot(x.a - y.a, x.b - y.b);
}

// Absolute hue difference with wrap-around; achromatic colors take h = 0.
inline double hue_abs_distance(LabColor x, LabColor y) {
    return hue_distance_deg(lab_to_lch(x).h, lab_to_lch(y).h);
}

inline double color_distance(ColorMetric metric, LabColor x, LabColor y) {
    switch (metric) {
        case ColorMetric::DE1976: return delta_e_1976(x, y);
        case ColorMetric::DE2000: return delta_e_2000(x, y);
        case ColorMetric::AB_PLANE: return ab_plane_distance(x, y);
        case ColorMetric::HUE_ABS: return hue_abs_distance(x, y);
    }
    return 0.0;
}

constexpr const char* to_string(ColorMetric m) {
    switch (m) {
        case ColorMetric::DE1976: return "de1976";
        case ColorMetric::DE2000: return "de2000";
        case ColorMetric::AB_PLANE: return "ab";
        case ColorMetric::HUE_ABS: return "hue";
    }
    return "?";
}

// Accepts the four names used across CLI flags and CSV columns.
inline bool parse_metric(std::string_view name, ColorMetric& out) {
    if (name == "de1976") out = ColorMetric::DE1976;
    else if (name == "de2000") out = ColorMetric::DE2000;
    else if (name == "ab") out = ColorMetric::AB_PLANE;
    else if (name == "hue") out = ColorMetric::HUE_ABS;
    else return false;
    return true;
}

}  // namespace visrecon
