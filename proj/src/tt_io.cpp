#include "ttc/tt_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ttc/errors.hpp"

namespace ttc {

namespace {

void write_values(std::ostream& os, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " " : "") << values[i];
  os << '\n';
}

template <class T>
T read_value(std::istream& is, const char* what) {
  T v{};
  if (!(is >> v)) throw InputError(std::string("malformed serialized tensor: expected ") + what);
  return v;
}

std::vector<double> read_values(std::istream& is, std::size_t count) {
  std::vector<double> v(count);
  for (auto& x : v) x = read_value<double>(is, "core entry");
  return v;
}

void expect_magic(std::istream& is, const std::string& magic) {
  std::string tag;
  if (!(is >> tag) || tag != magic) throw InputError("expected header '" + magic + "', found '" + tag + "'");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  return is;
}

} // namespace

void write_tt(std::ostream& os, const TensorTrain& tt) {
  const auto old = os.precision(17);
  os << "TTv1\n" << tt.dim() << '\n';
  for (const auto& c : tt.cores()) {
    os << c.left() << ' ' << c.mode() << ' ' << c.right() << '\n';
    write_values(os, c.data());
  }
  os.precision(old);
}

TensorTrain read_tt(std::istream& is) {
  expect_magic(is, "TTv1");
  const auto d = read_value<std::size_t>(is, "dimension");
  std::vector<Core3> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const auto l = read_value<std::size_t>(is, "rank");
    const auto n = read_value<std::size_t>(is, "mode size");
    const auto r = read_value<std::size_t>(is, "rank");
    cores.emplace_back(l, n, r, read_values(is, l * n * r));
  }
  return TensorTrain(std::move(cores));
}

void save_tt(const std::filesystem::path& path, const TensorTrain& tt) {
  auto os = open_out(path);
  write_tt(os, tt);
}

TensorTrain load_tt(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_tt(is);
}

void write_mpo(std::ostream& os, const Mpo& mpo) {
  const auto old = os.precision(17);
  os << "MPOv1\n" << mpo.dim() << '\n';
  for (const auto& c : mpo.cores()) {
    os << c.left() << ' ' << c.rows() << ' ' << c.cols() << ' ' << c.right() << '\n';
    write_values(os, c.data());
  }
  os.precision(old);
}

Mpo read_mpo(std::istream& is) {
  expect_magic(is, "MPOv1");
  const auto d = read_value<std::size_t>(is, "dimension");
  std::vector<Core4> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const auto l = read_value<std::size_t>(is, "rank");
    const auto m = read_value<std::size_t>(is, "row mode size");
    const auto n = read_value<std::size_t>(is, "col mode size");
    const auto r = read_value<std::size_t>(is, "rank");
    cores.emplace_back(l, m, n, r, read_values(is, l * m * n * r));
  }
  return Mpo(std::move(cores));
}

void save_mpo(const std::filesystem::path& path, const Mpo& mpo) {
  auto os = open_out(path);
  write_mpo(os, mpo);
}

Mpo load_mpo(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_mpo(is);
}

} // namespace ttc
