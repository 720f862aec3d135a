#include "cqed/sweep.hpp"

#include "cqed/analytics.hpp"
#include "cqed/protocols.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace cqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument&) {
    return kNaN;
  }
}

bool known_parameter(std::string_view name) {
  return std::find(std::begin(kParameterNames), std::end(kParameterNames), name) !=
         std::end(kParameterNames);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int to_count(std::string_view name, double value, int minimum) {
  const double rounded = std::round(value);
  if (!std::isfinite(value) || std::abs(value - rounded) > 1e-9 || rounded < minimum) {
    throw std::invalid_argument(std::string(name) + " must be an integer >= " +
                                std::to_string(minimum));
  }
  return static_cast<int>(rounded);
}

}  // namespace

Protocol parse_protocol(std::string_view name) {
  if (name == "optimal-ecp") return Protocol::OptimalEcp;
  if (name == "ghz-ecp") return Protocol::GhzEcp;
  if (name == "efficient-ecp") return Protocol::EfficientEcp;
  if (name == "epp") return Protocol::Epp;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::OptimalEcp: return "optimal-ecp";
    case Protocol::GhzEcp: return "ghz-ecp";
    case Protocol::EfficientEcp: return "efficient-ecp";
    case Protocol::Epp: return "epp";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "ideal") return Mode::Ideal;
  if (name == "practical") return Mode::Practical;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode m) { return m == Mode::Ideal ? "ideal" : "practical"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::vector<double> Axis::values() const {
  if (steps < 1) throw std::invalid_argument("axis '" + name + "' needs steps >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) / (steps - 1));
  }
  out.back() = stop;
  return out;
}

Axis parse_axis(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const auto colon = text.find(':', begin);
    parts.emplace_back(text.substr(begin, colon - begin));
    if (colon == std::string_view::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 4) {
    throw std::invalid_argument("axis must look like NAME:START:STOP:STEPS, got '" +
                                std::string(text) + "'");
  }
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad number '" + s + "' in axis '" + std::string(text) + "'");
    }
    return v;
  };
  Axis axis{parts[0], number(parts[1]), number(parts[2]), 0};
  axis.steps = to_count("axis steps", number(parts[3]), 1);
  if (!known_parameter(axis.name)) {
    throw std::invalid_argument("unknown axis parameter '" + axis.name + "'");
  }
  return axis;
}

void PointParams::set(std::string_view name, double value) {
  if (name == "alpha") alpha = value;
  else if (name == "f0") f0 = value;
  else if (name == "g-over-kappa") g_over_kappa = value;
  else if (name == "delta-over-kappa") delta_over_kappa = value;
  else if (name == "big-delta-over-kappa") big_delta_over_kappa = value;
  else if (name == "gamma-over-kappa") gamma_over_kappa = value;
  else if (name == "rounds") rounds = to_count(name, value, 1);
  else if (name == "ghz-size") ghz_size = to_count(name, value, 2);
  else throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
}

CavityParams PointParams::cavity() const {
  CavityParams p;
  p.g = g_over_kappa;
  p.kappa = 1.0;
  p.gamma = gamma_over_kappa;
  p.big_delta = big_delta_over_kappa;
  p.delta_prime = delta_over_kappa;
  p.validate();
  return p;
}

void SweepSpec::validate() const {
  std::set<std::string> seen;
  for (const auto& a : axes) {
    if (!known_parameter(a.name)) throw std::invalid_argument("unknown axis parameter '" + a.name + "'");
    if (a.steps < 1) throw std::invalid_argument("axis '" + a.name + "' needs steps >= 1");
    if (!seen.insert(a.name).second) throw std::invalid_argument("axis '" + a.name + "' given twice");
  }
  for (const auto& [name, value] : fixed) {
    if (!known_parameter(name)) throw std::invalid_argument("unknown parameter '" + name + "'");
    if (seen.count(name) != 0) {
      throw std::invalid_argument("parameter '" + name + "' is both swept and fixed");
    }
  }
  if (shots < 1) throw std::invalid_argument("shots must be positive");
}

ResultRow run(Protocol protocol, Mode mode, const PointParams& params) {
  const CavityParams cav = params.cavity();
  ResultRow row;
  row.protocol = protocol;
  row.mode = mode;
  row.params = params;
  const ReflectionPair c = reflection_pair(cav, mode);
  const double alpha = params.alpha;
  if (protocol != Protocol::Epp && !(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));

  switch (protocol) {
    case Protocol::OptimalEcp: {
      const ProtocolResult r = optimal_ecp(alpha, beta, cav, mode);
      row.eta_sim = r.success_probability;
      row.fidelity_sim = r.find_branch({{"D_h", "click"}})->fidelity;
      // The closed forms assume the filter sits on the beta arm.
      if (alpha <= beta) {
        row.eta_analytic = or_nan([&] { return analytics::eta_c(alpha, beta, c.r, c.r0); });
        row.fidelity_analytic = or_nan([&] { return analytics::f_c(alpha, beta, c.r, c.r0); });
      } else {
        row.eta_analytic = row.fidelity_analytic = kNaN;
      }
      row.eta_total_sim = row.eta_sim;
      row.fidelity_final_sim = r.fidelity;
      break;
    }
    case Protocol::GhzEcp: {
      const ProtocolResult r = ghz_concentrate(alpha, beta, params.ghz_size, cav, mode);
      row.eta_sim = r.success_probability;
      row.fidelity_sim = r.fidelity;
      if (mode == Mode::Ideal) {
        row.eta_analytic = analytics::ghz_success_ideal(alpha);
        row.fidelity_analytic = 1.0;
      } else {
        row.eta_analytic = row.fidelity_analytic = kNaN;
      }
      row.eta_total_sim = row.eta_sim;
      row.fidelity_final_sim = r.fidelity;
      break;
    }
    case Protocol::EfficientEcp: {
      const EfficientEcpResult r = efficient_ecp(alpha, beta, cav, mode, params.rounds);
      row.eta_sim = r.first_round.success_probability;
      row.fidelity_sim = r.first_round.fidelity;
      row.eta_analytic = analytics::eta_c_prime(alpha, c.r, c.r0);
      row.fidelity_analytic = analytics::f_c_prime();
      row.eta_total_sim = r.trace.cumulative_success_probability;
      row.fidelity_final_sim = r.trace.rounds.back().fidelity;
      break;
    }
    case Protocol::Epp: {
      const EppRoundResult r = epp_round(params.f0, cav, mode);
      row.eta_sim = r.result.success_probability;
      row.fidelity_sim = r.fidelity_hh_agreeing;
      row.eta_analytic = or_nan([&] { return analytics::eta_p(params.f0, c.r, c.r0); });
      row.fidelity_analytic = or_nan([&] { return analytics::f_p(params.f0, c.r, c.r0); });
      if (params.rounds == 1) {
        row.eta_total_sim = row.eta_sim;
        row.fidelity_final_sim = r.new_fidelity;
      } else {
        const IterationTrace t = epp_iterate(params.f0, params.rounds, cav, mode);
        row.eta_total_sim = t.cumulative_success_probability;
        row.fidelity_final_sim = t.rounds.back().fidelity;
      }
      break;
    }
  }
  row.abs_d_eta = std::abs(row.eta_sim - row.eta_analytic);
  row.abs_d_fidelity = std::abs(row.fidelity_sim - row.fidelity_analytic);
  return row;
}

std::vector<ResultRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::vector<double>> grid;
  std::size_t total = 1;
  for (const auto& a : spec.axes) {
    grid.push_back(a.values());
    total *= grid.back().size();
  }

  PointParams base;
  for (const auto& [name, value] : spec.fixed) base.set(name, value);

  auto point = [&](std::size_t index) {
    PointParams p = base;
    for (std::size_t k = grid.size(); k-- > 0;) {
      const std::size_t n = grid[k].size();
      p.set(spec.axes[k].name, grid[k][index % n]);
      index /= n;
    }
    return p;
  };

  std::vector<std::optional<ResultRow>> slots(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        ResultRow row = run(spec.protocol, spec.mode, point(i));
        if (spec.seed) {
          std::mt19937_64 rng(*spec.seed + i);
          std::binomial_distribution<int> draw(spec.shots, std::clamp(row.eta_sim, 0.0, 1.0));
          row.eta_sampled = static_cast<double>(draw(rng)) / spec.shots;
        }
        slots[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(total, 1));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  rows.reserve(total);
  for (auto& s : slots) rows.push_back(std::move(*s));
  return rows;
}

void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format) {
  const bool sampled =
      std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.eta_sampled.has_value(); });

  auto numeric_fields = [&](const ResultRow& r) {
    std::vector<std::pair<const char*, double>> f{
        {"alpha", r.params.alpha},
        {"f0", r.params.f0},
        {"g_over_kappa", r.params.g_over_kappa},
        {"delta_over_kappa", r.params.delta_over_kappa},
        {"big_delta_over_kappa", r.params.big_delta_over_kappa},
        {"gamma_over_kappa", r.params.gamma_over_kappa},
        {"rounds", static_cast<double>(r.params.rounds)},
        {"ghz_size", static_cast<double>(r.params.ghz_size)},
        {"eta_sim", r.eta_sim},
        {"eta_analytic", r.eta_analytic},
        {"fidelity_sim", r.fidelity_sim},
        {"fidelity_analytic", r.fidelity_analytic},
        {"abs_d_eta", r.abs_d_eta},
        {"abs_d_fidelity", r.abs_d_fidelity},
        {"eta_total_sim", r.eta_total_sim},
        {"fidelity_final_sim", r.fidelity_final_sim}};
    if (sampled) f.emplace_back("eta_sampled", r.eta_sampled.value_or(kNaN));
    return f;
  };

  if (format == OutputFormat::Csv) {
    os << "protocol,mode";
    for (const auto& [name, v] : numeric_fields(rows.empty() ? ResultRow{} : rows.front())) {
      os << ',' << name;
    }
    os << '\n';
    for (const auto& r : rows) {
      os << to_string(r.protocol) << ',' << to_string(r.mode);
      for (const auto& [name, v] : numeric_fields(r)) os << ',' << format_number(v);
      os << '\n';
    }
    return;
  }

  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    obj["protocol"] = std::string(to_string(r.protocol));
    obj["mode"] = std::string(to_string(r.mode));
    for (const auto& [name, v] : numeric_fields(r)) {
      if (std::isnan(v)) {
        obj[name] = nullptr;
      } else if (std::string_view(name) == "rounds" || std::string_view(name) == "ghz_size") {
        obj[name] = static_cast<int>(v);
      } else {
        obj[name] = std::strtod(format_number(v).c_str(), nullptr);
      }
    }
    out.push_back(std::move(obj));
  }
  os << out.dump(2) << '\n';
}

}  // namespace cqed
