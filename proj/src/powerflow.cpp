#include "hatsga/powerflow.hpp"

#include <cmath>
#include <limits>

namespace hatsga {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

NewtonSystem::NewtonSystem(const Network& net, const Topology& topo)
    : net_(&net), slack_(net.slack_index()) {
    if (!connects_all_buses(net, topo.closed))
        throw std::invalid_argument("power flow: topology islands a bus from the slack");

    y_ = build_admittance(net, topo).y;

    const int n = net.bus_count();
    p_spec_.assign(n, 0.0);
    q_spec_.assign(n, 0.0);
    v_set_.assign(n, 1.0);
    for (int i = 0; i < n; ++i) {
        const BusRecord& b = net.buses()[i];
        p_spec_[i] = (b.p_gen - b.p_load) / net.base_mva();
        q_spec_[i] = (b.q_gen - b.q_load) / net.base_mva();
        v_set_[i] = b.v_mag;
        if (i == slack_) continue;
        angle_vars_.push_back(i);
        if (b.kind == BusKind::Load) mag_vars_.push_back(i);
    }
}

void NewtonSystem::fix_reactive(int bus_index, double q_injection_pu) {
    q_spec_[bus_index] = q_injection_pu;
    mag_vars_.push_back(bus_index);
    std::sort(mag_vars_.begin(), mag_vars_.end());
}

Eigen::VectorXd NewtonSystem::initial_state(bool flat_start) const {
    Eigen::VectorXd x(dimension());
    const auto& buses = net_->buses();
    const double slack_angle = buses[slack_].v_ang;
    for (std::size_t k = 0; k < angle_vars_.size(); ++k)
        x[k] = flat_start ? slack_angle : buses[angle_vars_[k]].v_ang;
    for (std::size_t k = 0; k < mag_vars_.size(); ++k) {
        const double vm = v_set_[mag_vars_[k]];
        x[angle_vars_.size() + k] = flat_start ? 1.0 : (vm > 0.0 ? vm : 1.0);
    }
    return x;
}

void NewtonSystem::unpack(const Eigen::VectorXd& state, std::vector<double>& v_mag,
                          std::vector<double>& v_ang) const {
    const int n = net_->bus_count();
    // fixed quantities (slack, PV setpoints), then the free variables on top
    v_mag.assign(v_set_.begin(), v_set_.end());
    v_ang.assign(n, net_->buses()[slack_].v_ang);
    for (std::size_t k = 0; k < angle_vars_.size(); ++k) v_ang[angle_vars_[k]] = state[k];
    for (std::size_t k = 0; k < mag_vars_.size(); ++k)
        v_mag[mag_vars_[k]] = state[angle_vars_.size() + k];
}

void NewtonSystem::injections(const std::vector<double>& v, const std::vector<double>& th,
                              std::vector<double>& p, std::vector<double>& q) const {
    const int n = net_->bus_count();
    p.assign(n, 0.0);
    q.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double pi = 0.0, qi = 0.0;
        for (int j = 0; j < n; ++j) {
            const std::complex<double> yij = y_(i, j);
            if (yij == std::complex<double>(0.0, 0.0)) continue;
            const double g = yij.real(), b = yij.imag();
            const double tij = th[i] - th[j];
            const double c = std::cos(tij), s = std::sin(tij);
            pi += v[j] * (g * c + b * s);
            qi += v[j] * (g * s - b * c);
        }
        p[i] = v[i] * pi;
        q[i] = v[i] * qi;
    }
}

Eigen::VectorXd NewtonSystem::mismatch(const Eigen::VectorXd& state) const {
    std::vector<double> v, th, p, q;
    unpack(state, v, th);
    injections(v, th, p, q);
    Eigen::VectorXd f(dimension());
    for (std::size_t k = 0; k < angle_vars_.size(); ++k) {
        int i = angle_vars_[k];
        f[k] = p_spec_[i] - p[i];
    }
    for (std::size_t k = 0; k < mag_vars_.size(); ++k) {
        int i = mag_vars_[k];
        f[angle_vars_.size() + k] = q_spec_[i] - q[i];
    }
    return f;
}

Eigen::MatrixXd NewtonSystem::jacobian(const Eigen::VectorXd& state) const {
    std::vector<double> v, th, p, q;
    unpack(state, v, th);
    injections(v, th, p, q);

    const int na = static_cast<int>(angle_vars_.size());
    const int nm = static_cast<int>(mag_vars_.size());
    Eigen::MatrixXd jac(na + nm, na + nm);

    // d(mismatch)/dx = -d(calculated injection)/dx; standard polar expressions.
    auto dp_dth = [&](int i, int j) {
        if (i == j) return -q[i] - y_(i, i).imag() * v[i] * v[i];
        const double tij = th[i] - th[j];
        return v[i] * v[j] * (y_(i, j).real() * std::sin(tij) - y_(i, j).imag() * std::cos(tij));
    };
    auto dp_dv = [&](int i, int j) {
        if (i == j) return p[i] / v[i] + y_(i, i).real() * v[i];
        const double tij = th[i] - th[j];
        return v[i] * (y_(i, j).real() * std::cos(tij) + y_(i, j).imag() * std::sin(tij));
    };
    auto dq_dth = [&](int i, int j) {
        if (i == j) return p[i] - y_(i, i).real() * v[i] * v[i];
        const double tij = th[i] - th[j];
        return -v[i] * v[j] * (y_(i, j).real() * std::cos(tij) + y_(i, j).imag() * std::sin(tij));
    };
    auto dq_dv = [&](int i, int j) {
        if (i == j) return q[i] / v[i] - y_(i, i).imag() * v[i];
        const double tij = th[i] - th[j];
        return v[i] * (y_(i, j).real() * std::sin(tij) - y_(i, j).imag() * std::cos(tij));
    };

    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b)
            jac(a, b) = -dp_dth(angle_vars_[a], angle_vars_[b]);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nm; ++b)
            jac(a, na + b) = -dp_dv(angle_vars_[a], mag_vars_[b]);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < na; ++b)
            jac(na + a, b) = -dq_dth(mag_vars_[a], angle_vars_[b]);
    for (int a = 0; a < nm; ++a)
        for (int b = 0; b < nm; ++b)
            jac(na + a, na + b) = -dq_dv(mag_vars_[a], mag_vars_[b]);
    return jac;
}

namespace {

struct NewtonOutcome {
    bool converged = false;
    int steps = 0;
    double max_mismatch = 0.0;
    Eigen::VectorXd state;
};

NewtonOutcome run_newton(const NewtonSystem& sys, Eigen::VectorXd x, const SolverConfig& cfg) {
    NewtonOutcome out;
    for (int step = 0; step <= cfg.max_iterations; ++step) {
        const Eigen::VectorXd f = sys.mismatch(x);
        out.max_mismatch = f.size() > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
        out.steps = step;
        out.state = x;
        if (!std::isfinite(out.max_mismatch)) return out;
        if (out.max_mismatch <= cfg.tolerance) {
            out.converged = true;
            return out;
        }
        if (step == cfg.max_iterations) return out;

        // jac = dF/dx of the mismatch F; Newton solves F + jac*dx = 0
        const Eigen::MatrixXd jac = sys.jacobian(x);
        const Eigen::VectorXd dx = jac.partialPivLu().solve(f);
        if (!dx.allFinite()) return out;
        x -= dx;
        // magnitudes collapsing to zero or below cannot recover
        for (int k = static_cast<int>(sys.angle_vars().size()); k < x.size(); ++k)
            if (x[k] <= 0.0) return out;
    }
    return out;
}

}  // namespace

PowerFlowSolution solve(const Network& net, const Topology& topo, const SolverConfig& cfg) {
    if (cfg.tolerance <= 0.0) throw std::invalid_argument("solver tolerance must be positive");
    if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");

    NewtonSystem sys(net, topo);
    NewtonOutcome nr = run_newton(sys, sys.initial_state(cfg.flat_start), cfg);

    if (cfg.enforce_q_limits && nr.converged) {
        // Converged PV buses violating their reactive range are pinned at the
        // limit and demoted to PQ, then the flow is re-solved. At most one
        // demotion round per generator.
        const int n = net.bus_count();
        for (int round = 0; round < n; ++round) {
            std::vector<double> v, th, p, q;
            sys.unpack(nr.state, v, th);
            sys.injections(v, th, p, q);
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                const BusRecord& b = net.buses()[i];
                if (i == net.slack_index() || b.kind != BusKind::Generator) continue;
                if (std::binary_search(sys.mag_vars().begin(), sys.mag_vars().end(), i))
                    continue;  // already demoted
                const double qgen_mvar = q[i] * net.base_mva() + b.q_load;
                if (qgen_mvar < b.q_min - 1e-9 || qgen_mvar > b.q_max + 1e-9) {
                    const double pinned = std::clamp(qgen_mvar, b.q_min, b.q_max);
                    sys.fix_reactive(i, (pinned - b.q_load) / net.base_mva());
                    changed = true;
                }
            }
            if (!changed) break;
            nr = run_newton(sys, sys.initial_state(cfg.flat_start), cfg);
            if (!nr.converged) break;
        }
    }

    PowerFlowSolution sol;
    sol.converged = nr.converged;
    sol.iterations = nr.steps;
    sol.max_mismatch = nr.max_mismatch;
    sys.unpack(nr.state, sol.v_mag, sol.v_ang);

    const int m = net.branch_count();
    sol.p_branch.assign(m, kNan);
    sol.q_branch.assign(m, kNan);
    sol.p_branch_to.assign(m, kNan);
    sol.q_branch_to.assign(m, kNan);
    sol.loss_total = 0.0;

    for (int id : topo.closed) {
        const BranchRecord& br = net.branch(id);
        const int f = net.bus_index(br.from_bus);
        const int t = net.bus_index(br.to_bus);
        const std::complex<double> vf = std::polar(sol.v_mag[f], sol.v_ang[f]);
        const std::complex<double> vt = std::polar(sol.v_mag[t], sol.v_ang[t]);
        const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
        const std::complex<double> shunt(0.0, br.b_half);
        const double tap = br.tap;

        const std::complex<double> i_from = (ys + shunt) / (tap * tap) * vf - ys / tap * vt;
        const std::complex<double> i_to = -ys / tap * vf + (ys + shunt) * vt;
        const std::complex<double> s_from = vf * std::conj(i_from) * net.base_mva();
        const std::complex<double> s_to = vt * std::conj(i_to) * net.base_mva();

        sol.p_branch[id - 1] = s_from.real();
        sol.q_branch[id - 1] = s_from.imag();
        sol.p_branch_to[id - 1] = s_to.real();
        sol.q_branch_to[id - 1] = s_to.imag();
        sol.loss_total += s_from.real() + s_to.real();
    }
    return sol;
}

double eq1_loss_mw(const Network& net, const Topology& topo, const PowerFlowSolution& sol) {
    const double base = net.base_mva();
    double loss_pu = 0.0;
    for (int id : topo.closed) {
        const BranchRecord& br = net.branch(id);
        const double p = sol.p_branch[id - 1] / base;
        const double q = sol.q_branch[id - 1] / base;
        const double v = sol.v_mag[net.bus_index(br.from_bus)];
        loss_pu += br.r * (p * p + q * q) / (v * v);
    }
    return loss_pu * base;
}

}  // namespace hatsga
