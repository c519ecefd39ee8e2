#include "gaugesep/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gaugesep::cli {
namespace {

constexpr int kPixels = 480;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Sutherland-Hodgman clip of a convex polygon against a.e <= b.
std::vector<Vector> clip(const std::vector<Vector>& poly, const Vector& a, double b) {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vector& p = poly[i];
        const Vector& q = poly[(i + 1) % poly.size()];
        const double fp = a.dot(p) - b;
        const double fq = a.dot(q) - b;
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (fp / (fp - fq)) * (q - p));
    }
    return out;
}

double view_radius(const SvgScene& scene) {
    double r = 2.0;
    const ConvexSet& a = *scene.a;
    if (const auto* ball = a.as_ball()) r = std::max(r, ball->center.norm() + ball->radius);
    if (a.witness()) r = std::max(r, a.witness()->norm());
    if (scene.anchor) r = std::max(r, scene.anchor->norm());
    return 1.25 * r;
}

}  // namespace

std::string render_svg(const SvgScene& scene) {
    const double r = view_radius(scene);
    const double scale = kPixels / (2.0 * r);
    auto px = [&](double x) { return fmt((x + r) * scale); };
    auto py = [&](double y) { return fmt((r - y) * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPixels << "\" height=\"" << kPixels
        << "\" viewBox=\"0 0 " << kPixels << " " << kPixels << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"0\" y1=\"" << py(0) << "\" x2=\"" << kPixels << "\" y2=\"" << py(0)
        << "\" stroke=\"#ccc\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"0\" x2=\"" << px(0) << "\" y2=\"" << kPixels << "\" stroke=\"#ccc\"/>\n";

    // Admissible fan: every line through the origin that misses A.
    svg << "<g id=\"fan\" stroke=\"#9ecae1\" stroke-width=\"1\" opacity=\"0.6\">\n";
    for (double theta : scene.fan_angles) {
        const double c = std::cos(theta) * r * 1.5;
        const double s = std::sin(theta) * r * 1.5;
        svg << "<line x1=\"" << px(-c) << "\" y1=\"" << py(-s) << "\" x2=\"" << px(c) << "\" y2=\"" << py(s)
            << "\"/>\n";
    }
    svg << "</g>\n";

    const ConvexSet& a = *scene.a;
    svg << "<g id=\"set\" fill=\"#fdae6b\" fill-opacity=\"0.7\" stroke=\"#e6550d\">\n";
    if (const auto* ball = a.as_ball()) {
        svg << "<circle cx=\"" << px(ball->center(0)) << "\" cy=\"" << py(ball->center(1)) << "\" r=\""
            << fmt(ball->radius * scale) << "\"/>\n";
    } else if (const auto* poly = a.as_polyhedron()) {
        const double m = 2.0 * r;
        std::vector<Vector> shape = {Vector{{-m, -m}}, Vector{{m, -m}}, Vector{{m, m}}, Vector{{-m, m}}};
        for (Eigen::Index i = 0; i < poly->a.rows() && !shape.empty(); ++i) {
            shape = clip(shape, poly->a.row(i).transpose(), poly->b(i));
        }
        if (!shape.empty()) {
            svg << "<polygon points=\"";
            for (const Vector& v : shape) svg << px(v(0)) << "," << py(v(1)) << " ";
            svg << "\"/>\n";
        }
    } else {
        // Membership raster.
        constexpr int cells = 120;
        const double step = 2.0 * r / cells;
        for (int i = 0; i < cells; ++i) {
            for (int j = 0; j < cells; ++j) {
                const Vector c{{-r + (i + 0.5) * step, -r + (j + 0.5) * step}};
                if (!a.contains(c)) continue;
                svg << "<rect x=\"" << px(c(0) - 0.5 * step) << "\" y=\"" << py(c(1) + 0.5 * step) << "\" width=\""
                    << fmt(step * scale) << "\" height=\"" << fmt(step * scale) << "\" stroke=\"none\"/>\n";
            }
        }
    }
    svg << "</g>\n";

    if (scene.s != nullptr && scene.s->dim() == 1) {
        const Vector d = scene.s->basis_vector(0) * r * 1.5;
        svg << "<line id=\"subspace\" x1=\"" << px(-d(0)) << "\" y1=\"" << py(-d(1)) << "\" x2=\"" << px(d(0))
            << "\" y2=\"" << py(d(1)) << "\" stroke=\"#31a354\" stroke-width=\"3\" stroke-dasharray=\"6 4\"/>\n";
    }
    if (scene.normal) {
        // Ker(n) is spanned by n rotated a quarter turn.
        const Vector& n = *scene.normal;
        const Vector d = Vector{{-n(1), n(0)}} * (r * 1.5 / n.norm());
        svg << "<line id=\"hyperplane\" x1=\"" << px(-d(0)) << "\" y1=\"" << py(-d(1)) << "\" x2=\"" << px(d(0))
            << "\" y2=\"" << py(d(1)) << "\" stroke=\"#08519c\" stroke-width=\"2.5\"/>\n";
    }
    svg << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"3\" fill=\"black\"/>\n";
    if (scene.anchor) {
        svg << "<circle id=\"anchor\" cx=\"" << px((*scene.anchor)(0)) << "\" cy=\"" << py((*scene.anchor)(1))
            << "\" r=\"4\" fill=\"#756bb1\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gaugesep::cli
