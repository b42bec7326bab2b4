#include "peritl/svg.hpp"

#include <cmath>
#include <sstream>

namespace peritl {

namespace {

struct Pt {
    double x, y;
};

// node positions: counter-clockwise, node 1 just past the seam (which sits
// at angle -90 degrees)
Pt node_pos(int index, int count, double radius) {
    double theta = -M_PI / 2 + 2 * M_PI * (index - 0.5) / count;
    return {200 + radius * std::cos(theta), 200 - radius * std::sin(theta)};
}

double node_angle(int index, int count) { return -M_PI / 2 + 2 * M_PI * (index - 0.5) / count; }

void arc_path(std::ostringstream& os, Pt a, Pt b, Pt ctrl) {
    os << "<path d=\"M " << a.x << ' ' << a.y << " Q " << ctrl.x << ' ' << ctrl.y << ' ' << b.x
       << ' ' << b.y << "\" fill=\"none\" stroke=\"#2156a5\" stroke-width=\"2.2\"/>\n";
}

}  // namespace

std::string render_svg(const AnnularDiagram& d) {
    d.check();
    const double r_out = 170, r_in = 70, cx = 200, cy = 200;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
          "viewBox=\"0 0 400 400\">\n";
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r_out
       << "\" fill=\"#eef4fb\" stroke=\"#444\"/>\n";
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r_in
       << "\" fill=\"#ffffff\" stroke=\"#444\"/>\n";
    // dashed seam between node N and node 1 (angle -90)
    os << "<line x1=\"" << cx << "\" y1=\"" << cy + r_in << "\" x2=\"" << cx << "\" y2=\""
       << cy + r_out << "\" stroke=\"#666\" stroke-dasharray=\"6 5\"/>\n";

    ExplicitForm e = canonical_to_explicit(d);
    auto pos = [&](const Endpoint& p) {
        return node_pos(p.index, p.side == 0 ? d.n_out : d.n_in, p.side == 0 ? r_out : r_in);
    };
    auto ang = [&](const Endpoint& p) {
        return node_angle(p.index, p.side == 0 ? d.n_out : d.n_in);
    };
    for (const Strand& s : e.strands) {
        Pt a = pos(s.a), b = pos(s.b);
        if (s.seam_cross == 0) {
            double mr = s.a.side == s.b.side ? (s.a.side == 0 ? r_out - 45 : r_in + 45)
                                             : (r_out + r_in) / 2;
            double am = (ang(s.a) + ang(s.b)) / 2;
            // keep the control point on the short side
            if (std::abs(ang(s.a) - ang(s.b)) > M_PI) am += M_PI;
            Pt ctrl{cx + mr * std::cos(am), cy - mr * std::sin(am)};
            arc_path(os, a, b, ctrl);
        } else {
            // seam-crossing strand: route it via a control point near the seam
            double mr = (r_out + r_in) / 2;
            Pt ctrl{cx + mr * std::cos(-M_PI / 2), cy - mr * std::sin(-M_PI / 2)};
            arc_path(os, a, b, ctrl);
        }
    }
    for (size_t i = 0; i < e.loops.size(); i++) {
        double r = r_in + 12.0 * (double)(i + 1);
        os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << r
           << "\" fill=\"none\" stroke=\"#2156a5\" stroke-width=\"2.2\"/>\n";
    }
    for (int p = 1; p <= d.n_out; p++) {
        Pt q = node_pos(p, d.n_out, r_out);
        os << "<circle cx=\"" << q.x << "\" cy=\"" << q.y << "\" r=\"3\" fill=\"#111\"/>\n";
    }
    for (int p = 1; p <= d.n_in; p++) {
        Pt q = node_pos(p, d.n_in, r_in);
        os << "<circle cx=\"" << q.x << "\" cy=\"" << q.y << "\" r=\"3\" fill=\"#111\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace peritl
