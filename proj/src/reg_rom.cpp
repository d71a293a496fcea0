#include "regrom/reg_rom.hpp"

#include "regrom/time_integration.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <sstream>

namespace regrom {

std::string to_string(RomModel model) {
  switch (model) {
    case RomModel::grom: return "grom";
    case RomModel::lrom: return "lrom";
    case RomModel::efr: return "efr";
    case RomModel::tr: return "tr";
  }
  return "?";
}

RomModel rom_model_from_string(const std::string& name) {
  if (name == "grom") return RomModel::grom;
  if (name == "lrom") return RomModel::lrom;
  if (name == "efr") return RomModel::efr;
  if (name == "tr") return RomModel::tr;
  throw Error("unknown ROM model '" + name + "'");
}

void RegRomConfig::validate() const {
  if (n < 1) throw Error("RegRomConfig: n must be positive");
  if (!(dt > 0.0)) throw Error("RegRomConfig: dt must be positive");
  if (n_steps < 0 || save_stride < 1) throw Error("RegRomConfig: invalid step counts");
  if (initial_coefficients.size() != n) throw DimensionError("RegRomConfig: initial coefficients must have length n");
  for (const auto& h : initial_history) {
    if (h.size() != n) throw DimensionError("RegRomConfig: history levels must have length n");
  }
  if (initial_history.size() > 2) throw Error("RegRomConfig: at most two older history levels");
  if (model == RomModel::grom) {
    if (filter) throw Error("RegRomConfig: G-ROM takes no filter");
  } else {
    if (!filter) throw Error("RegRomConfig: regularized models need a filter");
    if (filter->n != n) throw DimensionError("RegRomConfig: filter dimension differs from n");
  }
  if (model == RomModel::efr && (chi < 0.0 || chi > 1.0)) throw Error("RegRomConfig: EFR needs chi in [0, 1]");
  if (model == RomModel::tr && chi < 0.0) throw Error("RegRomConfig: TR needs chi >= 0");
}

namespace {

class RomIntegrator {
public:
  RomIntegrator(const RegRomConfig& cfg, const RomOperators& ops) : cfg_(cfg), ops_(ops), N_(cfg.n) {
    cfg_.validate();
    if (ops.n != N_) throw DimensionError("run_rom: operator dimension differs from config.n");
    const Matrix K = ops.linear_operator(cfg.nu);
    K11_ = K.bottomRightCorner(N_, N_);
    K10_ = K.col(0).tail(N_);
    forcing_ = ops.forcing.tail(N_);
    if (cfg_.model == RomModel::tr && cfg_.tr_treatment == RelaxationTreatment::implicit) {
      relax_ = cfg_.chi * (Matrix::Identity(N_, N_) - filter_matrix(*cfg_.filter));
    }
    for (int order = 1; order <= 3; ++order) {
      Matrix H = K11_;
      H.diagonal().array() += bdf_ext_coefficients(order).gamma0 / cfg_.dt;
      if (relax_.size() > 0) H += relax_;
      helmholtz_[order - 1].compute(H);
      const double rcond = helmholtz_[order - 1].rcond();
      if (!(rcond > 1e-14)) {
        std::ostringstream msg;
        msg << "run_rom: Helmholtz matrix is singular (rcond = " << rcond << ")";
        throw SingularSystemError(msg.str(), rcond);
      }
    }
  }

  RunResult run() {
    const auto t_begin = std::chrono::steady_clock::now();
    RunResult result;
    const long n_save = cfg_.n_steps / cfg_.save_stride + 1;
    result.coefficient_history.resize(n_save, N_);
    result.times.reserve(static_cast<std::size_t>(n_save));
    result.startup = cfg_.initial_history.size() >= 2 ? "projected-history" : "bdf-ramp";

    states_.clear();
    nonlinear_.clear();
    // Oldest first so that push_front leaves the newest at the front.
    for (auto it = cfg_.initial_history.rbegin(); it != cfg_.initial_history.rend(); ++it) push(*it);
    push(cfg_.initial_coefficients);

    Index row = 0;
    result.coefficient_history.row(row++) = cfg_.initial_coefficients.transpose();
    result.times.push_back(cfg_.start_time);
    const bool ramp = states_.size() < 3;
    if (ramp) result.startup_rows = 1;
    const double limit = cfg_.divergence_factor * std::max(cfg_.initial_coefficients.norm(), 1.0);

    for (long s = 1; s <= cfg_.n_steps; ++s) {
      const int order = std::min<int>(static_cast<int>(states_.size()), 3);
      if (order < 3) ++result.startup_steps;
      Vector next = advance(order);
      if (!next.allFinite() || next.norm() > limit) {
        result.diverged = true;
        result.diverged_step = s;
        break;
      }
      push(next);
      result.steps_taken = s;
      if (s % cfg_.save_stride == 0) {
        result.coefficient_history.row(row++) = next.transpose();
        result.times.push_back(cfg_.start_time + static_cast<double>(s) * cfg_.dt);
        if (s <= result.startup_steps) result.startup_rows = row;
      }
    }
    result.coefficient_history.conservativeResize(row, N_);
    result.filter_solves = filter_solves_;
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return result;
  }

private:
  Vector filtered(const Vector& a) {
    ++filter_solves_;
    return apply_filter(*cfg_.filter, a);
  }

  Vector nonlinear(const Vector& a) {
    Vector full(N_ + 1);
    full[0] = 1.0;
    full.tail(N_) = a;
    Vector out;
    if (cfg_.model == RomModel::lrom) {
      Vector advect(N_ + 1);
      advect[0] = 1.0;
      advect.tail(N_) = filtered(a);
      out = -ops_.C.contract(advect, full, 1);
    } else {
      out = -ops_.C.contract(full, full, 1);
    }
    out += forcing_ - K10_;
    if (cfg_.model == RomModel::tr && cfg_.tr_treatment == RelaxationTreatment::explicit_extrapolated) {
      out -= cfg_.chi * (a - filtered(a));
    }
    return out;
  }

  void push(const Vector& a) {
    states_.push_front(a);
    nonlinear_.push_front(nonlinear(a));
    if (states_.size() > 3) {
      states_.pop_back();
      nonlinear_.pop_back();
    }
  }

  Vector advance(int order) {
    Vector w;
    if (cfg_.model == RomModel::efr && cfg_.efr_evolve == EvolveScheme::forward_euler) {
      // Explicit diffusion: w = u^n + dt (N(u^n) - K11 u^n).
      w = states_.front() + cfg_.dt * (nonlinear_.front() - K11_ * states_.front());
    } else {
      std::vector<Vector> s(states_.begin(), states_.end());
      std::vector<Vector> nl(nonlinear_.begin(), nonlinear_.end());
      w = helmholtz_[order - 1].solve(bdf_ext_rhs<Vector>(order, s, nl, cfg_.dt));
    }
    if (cfg_.model == RomModel::efr) {
      const Vector wbar = filtered(w);
      return (1.0 - cfg_.chi) * w + cfg_.chi * wbar;
    }
    return w;
  }

  RegRomConfig cfg_;
  const RomOperators& ops_;
  Index N_;
  Matrix K11_;
  Vector K10_;
  Vector forcing_;
  Matrix relax_;
  std::array<Eigen::PartialPivLU<Matrix>, 3> helmholtz_;
  std::deque<Vector> states_;
  std::deque<Vector> nonlinear_;
  long filter_solves_ = 0;
};

void require_model(const RegRomConfig& cfg, RomModel model) {
  if (cfg.model != model) throw Error("run_" + to_string(model) + ": config.model is " + to_string(cfg.model));
}

}  // namespace

RunResult run_rom(const RegRomConfig& config, const RomOperators& ops) {
  return RomIntegrator(config, ops).run();
}

RunResult run_grom(const RegRomConfig& config, const RomOperators& ops) {
  require_model(config, RomModel::grom);
  return run_rom(config, ops);
}

RunResult run_lrom(const RegRomConfig& config, const RomOperators& ops) {
  require_model(config, RomModel::lrom);
  return run_rom(config, ops);
}

RunResult run_efr(const RegRomConfig& config, const RomOperators& ops) {
  require_model(config, RomModel::efr);
  return run_rom(config, ops);
}

RunResult run_tr(const RegRomConfig& config, const RomOperators& ops) {
  require_model(config, RomModel::tr);
  return run_rom(config, ops);
}

}  // namespace regrom
