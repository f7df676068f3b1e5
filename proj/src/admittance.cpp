#include "hatsga/admittance.hpp"

namespace hatsga {

AdmittanceMatrix build_admittance(const Network& net, const std::vector<int>& closed_switches) {
    const int n = net.bus_count();
    AdmittanceMatrix out;
    out.y = Eigen::MatrixXcd::Zero(n, n);

    for (int id : closed_switches) {
        const BranchRecord& br = net.branch(id);
        const int f = net.bus_index(br.from_bus);
        const int t = net.bus_index(br.to_bus);
        const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
        const std::complex<double> shunt(0.0, br.b_half);
        const double tap = br.tap;

        out.y(f, f) += (ys + shunt) / (tap * tap);
        out.y(t, t) += ys + shunt;
        out.y(f, t) += -ys / tap;
        out.y(t, f) += -ys / tap;
    }
    for (int i = 0; i < n; ++i)
        out.y(i, i) += std::complex<double>(0.0, net.buses()[i].shunt_b);
    return out;
}

AdmittanceMatrix build_admittance(const Network& net, const Topology& topo) {
    return build_admittance(net, topo.closed);
}

}  // namespace hatsga
