#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <variant>

#include "npsvor/baselines.hpp"
#include "npsvor/ordinal.hpp"

namespace npsvor {

enum class SolverKind { npsvor_dcd1, npsvor_dcd2, svc, svr, redsvm };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver(std::string_view name);

using AnyModel = std::variant<OrdinalModel, OvaModel, SvrModel, RedSvmModel>;

const ModelMeta& meta_of(const AnyModel& model);

// `predictor` only matters for NPSVOR models.
AnyModel train_model(SolverKind kind, const SparseDataset& data, const SolverConfig& cfg,
                     Predictor predictor = Predictor::new_rule, int jobs = 1);
int predict_rank(const AnyModel& model, const SparseVector& x, Predictor predictor);

// Text model format, version 1:
//
//   npsvor-model 1
//   solver <npsvor-dcd1|npsvor-dcd2|svc|svr|redsvm>
//   ranks <p>
//   features <m>                  (bias column included)
//   bias <value|none>
//   labels <l_1> ... <l_p>        (original label of rank k)
//   predictor <old|new>           (NPSVOR only)
//   vectors <count>               (p for NPSVOR/SVC, 1 for SVR/RedSVM)
//   <m space-separated weights>   (one line per vector)
//   thresholds <p-1>              (RedSVM only)
//   <p-1 space-separated values>
//   end
//
// Reals are printed with 17 significant digits so a reload is bit-exact.
void write_model(const AnyModel& model, SolverKind kind, std::ostream& out);
void save_model(const AnyModel& model, SolverKind kind, const std::filesystem::path& path);

struct LoadedModel {
  SolverKind kind;
  AnyModel model;
};

LoadedModel read_model(std::istream& in);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace npsvor
