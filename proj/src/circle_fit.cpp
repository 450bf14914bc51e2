#include "inkfrag/circle_fit.hpp"

#include <cmath>

namespace inkfrag {

std::optional<CircleFit> fit_circle_kasa(std::span<const Vec2> points) {
    const std::size_t n = points.size();
    if (n < 3) return std::nullopt;

    // Solve the 3x3 normal equations of x^2+y^2 + D x + E y + F = 0 with
    // coordinates shifted to the centroid for conditioning.
    Vec2 mean{0, 0};
    for (const Vec2& p : points) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(n));

    double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0, sz = 0;
    for (const Vec2& p : points) {
        const double x = p.x - mean.x;
        const double y = p.y - mean.y;
        const double z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    const double det = sxx * syy - sxy * sxy;
    if (std::abs(det) < 1e-12 * (sxx + syy) * (sxx + syy)) return std::nullopt;

    const double cx = (syy * sxz - sxy * syz) / (2.0 * det);
    const double cy = (sxx * syz - sxy * sxz) / (2.0 * det);
    const double r2 = cx * cx + cy * cy + sz / static_cast<double>(n);
    if (!(r2 > 0.0)) return std::nullopt;

    CircleFit fit;
    fit.center = {cx + mean.x, cy + mean.y};
    fit.radius = std::sqrt(r2);
    double err = 0.0;
    for (const Vec2& p : points) {
        const double d = distance(p, fit.center) - fit.radius;
        err += d * d;
    }
    fit.rms_error = std::sqrt(err / static_cast<double>(n));
    return fit;
}

std::optional<LineFit> fit_line(std::span<const Vec2> points) {
    const std::size_t n = points.size();
    if (n < 2) return std::nullopt;

    Vec2 mean{0, 0};
    for (const Vec2& p : points) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(n));

    double sxx = 0, sxy = 0, syy = 0;
    for (const Vec2& p : points) {
        const double x = p.x - mean.x;
        const double y = p.y - mean.y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    // Principal eigenvector of the 2x2 scatter matrix.
    const double tr = sxx + syy;
    const double diff = sxx - syy;
    const double disc = std::sqrt(diff * diff + 4.0 * sxy * sxy);
    const double l1 = (tr + disc) / 2.0;
    Vec2 dir;
    if (std::abs(sxy) > 1e-18) {
        dir = {l1 - syy, sxy};
    } else {
        dir = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    const double len = dir.norm();
    if (len < 1e-18) return std::nullopt;
    dir = dir * (1.0 / len);

    LineFit fit;
    fit.point = mean;
    fit.direction = dir;
    double err = 0.0;
    for (const Vec2& p : points) {
        const double d = (p - mean).cross(dir);
        err += d * d;
    }
    fit.rms_error = std::sqrt(err / static_cast<double>(n));
    return fit;
}

} // namespace inkfrag
