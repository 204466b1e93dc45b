#pragma once

// Text serialization: `TTv1` / `MPOv1`, 17 significant digits, core data in
// storage order (left rank slowest, right rank fastest).

#include <filesystem>
#include <iosfwd>

#include "ttc/mpo.hpp"
#include "ttc/tensor_train.hpp"

namespace ttc {

void write_tt(std::ostream& os, const TensorTrain& tt);
TensorTrain read_tt(std::istream& is);
void save_tt(const std::filesystem::path& path, const TensorTrain& tt);
TensorTrain load_tt(const std::filesystem::path& path);

void write_mpo(std::ostream& os, const Mpo& mpo);
Mpo read_mpo(std::istream& is);
void save_mpo(const std::filesystem::path& path, const Mpo& mpo);
Mpo load_mpo(const std::filesystem::path& path);

} // namespace ttc
