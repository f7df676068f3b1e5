#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hatsga/graph.hpp"
#include "hatsga/network.hpp"

namespace hatsga {

// Dense complex nodal admittance matrix for a given set of closed switches.
// Rows/columns follow the dense bus index order of the Network.
struct AdmittanceMatrix {
    Eigen::MatrixXcd y;
};

// Standard pi-model stamps with the off-nominal tap on the from side:
//   Y_ff += (y_s + j b_half) / tap^2
//   Y_tt += (y_s + j b_half)
//   Y_ft, Y_tf += -y_s / tap
// Bus shunts are added to the diagonal. Open switches contribute nothing.
AdmittanceMatrix build_admittance(const Network& net, const std::vector<int>& closed_switches);
AdmittanceMatrix build_admittance(const Network& net, const Topology& topo);

}  // namespace hatsga
