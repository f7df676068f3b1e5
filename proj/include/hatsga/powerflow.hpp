#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hatsga/admittance.hpp"
#include "hatsga/graph.hpp"
#include "hatsga/network.hpp"

namespace hatsga {

struct SolverConfig {
    double tolerance = 1e-8;    // pu mismatch, infinity norm
    int max_iterations = 50;
    bool flat_start = true;
    bool enforce_q_limits = false;
};

// Converged (or flagged non-converged) AC power-flow state. Branch flows are
// head-end (from side) and tail-end complex power in MW / MVAr, indexed by
// switch_id - 1; entries of open branches are NaN.
struct PowerFlowSolution {
    std::vector<double> v_mag;      // pu, dense bus order
    std::vector<double> v_ang;      // radians
    std::vector<double> p_branch, q_branch;        // head-end, MW / MVAr
    std::vector<double> p_branch_to, q_branch_to;  // tail-end, MW / MVAr
    double loss_total = 0.0;        // MW, sum of per-branch real losses
    int iterations = 0;             // Newton steps taken
    bool converged = false;
    double max_mismatch = 0.0;      // pu, at exit
};

// Mismatch and Jacobian of the polar Newton-Raphson system for one topology.
// State layout: angles of all non-slack buses, then magnitudes of PQ buses.
// Exposed so numeric tests can difference the mismatch directly.
class NewtonSystem {
  public:
    NewtonSystem(const Network& net, const Topology& topo);

    int dimension() const { return static_cast<int>(angle_vars_.size() + mag_vars_.size()); }
    Eigen::VectorXd initial_state(bool flat_start) const;
    Eigen::VectorXd mismatch(const Eigen::VectorXd& state) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& state) const;

    // Bus voltages implied by a state vector (fixed quantities filled in).
    void unpack(const Eigen::VectorXd& state, std::vector<double>& v_mag,
                std::vector<double>& v_ang) const;

    const std::vector<int>& angle_vars() const { return angle_vars_; }
    const std::vector<int>& mag_vars() const { return mag_vars_; }

    // Replace the reactive setpoint of one bus and demote it to PQ
    // (used for generator Q-limit enforcement).
    void fix_reactive(int bus_index, double q_injection_pu);

    // Calculated P/Q injections (pu) at the given voltages.
    void injections(const std::vector<double>& v, const std::vector<double>& th,
                    std::vector<double>& p, std::vector<double>& q) const;

  private:
    const Network* net_;
    Eigen::MatrixXcd y_;
    std::vector<int> angle_vars_;   // dense bus indices with a free angle
    std::vector<int> mag_vars_;     // dense bus indices with a free magnitude
    std::vector<double> p_spec_, q_spec_;  // pu injections
    std::vector<double> v_set_;
    int slack_ = 0;
};

// Polar Newton-Raphson power flow on the closed switches of `topo`.
// Throws std::invalid_argument if the topology leaves a bus disconnected from
// the slack. Never throws on non-convergence: the returned solution carries
// converged = false and the final mismatch.
PowerFlowSolution solve(const Network& net, const Topology& topo, const SolverConfig& cfg);

// Series-loss objective: sum over closed branches of r_i (P_i^2 + Q_i^2) / V_i^2
// with head-end per-unit flows and the head-node voltage, scaled to MW.
double eq1_loss_mw(const Network& net, const Topology& topo, const PowerFlowSolution& sol);

}  // namespace hatsga
