// Copyright 2026 The msoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msoc/program_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "msoc/errors.hpp"

namespace msoc {

namespace {

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void write_row(std::ostream& os, const AffineExpr& expr) {
  os << "row " << expr.coeffs.size() << ' ';
  write_double(os, expr.constant);
  for (const auto& [var, coef] : expr.coeffs) {
    os << ' ' << var << ' ';
    write_double(os, coef);
  }
  os << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  std::string token() {
    std::string t;
    if (!(is_ >> t)) throw ParseError("unexpected end of program file");
    return t;
  }

  void expect(const std::string& want) {
    const std::string got = token();
    if (got != want) {
      throw ParseError("expected '" + want + "', got '" + got + "'");
    }
  }

  long integer() {
    const std::string t = token();
    try {
      return std::stol(t);
    } catch (const std::exception&) {
      throw ParseError("expected integer, got '" + t + "'");
    }
  }

  double real() {
    const std::string t = token();
    try {
      return std::stod(t);
    } catch (const std::exception&) {
      throw ParseError("expected number, got '" + t + "'");
    }
  }

  AffineExpr row(int num_vars) {
    expect("row");
    return row_body(num_vars);
  }

  AffineExpr row_body(int num_vars) {
    AffineExpr expr;
    const long nnz = integer();
    expr.constant = real();
    for (long k = 0; k < nnz; ++k) {
      const long var = integer();
      if (var < 0 || var >= num_vars) {
        throw ParseError("variable index " + std::to_string(var) +
                         " out of range");
      }
      expr.coeffs.emplace_back(static_cast<int>(var), real());
    }
    return expr;
  }

 private:
  std::istream& is_;
};

}  // namespace

void write_program(std::ostream& os, const ConicProgram& program) {
  os << "msoc-program 1\n";
  os << "vars " << program.num_vars << '\n';
  for (int v = 0; v < program.num_vars; ++v) {
    const auto& [time, key] = program.variables[v];
    os << "var " << time << ' ' << key.i << ' ' << key.j << ' ';
    write_double(os, program.var_scales.empty() ? 1.0 : program.var_scales[v]);
    os << '\n';
  }
  os << "objective " << program.objective.coeffs.size() << ' ';
  write_double(os, program.objective.constant);
  for (const auto& [var, coef] : program.objective.coeffs) {
    os << ' ' << var << ' ';
    write_double(os, coef);
  }
  os << '\n';
  os << "eq " << program.equalities.size() << '\n';
  for (const auto& expr : program.equalities) write_row(os, expr);
  os << "ineq " << program.inequalities.size() << '\n';
  for (const auto& expr : program.inequalities) write_row(os, expr);
  os << "psd " << program.psd_blocks.size() << '\n';
  for (const auto& block : program.psd_blocks) {
    os << "block " << block.time_index << ' ' << block.side << '\n';
    for (const auto& entry : block.entries) write_row(os, entry);
  }
}

ConicProgram read_program(std::istream& is) {
  Reader reader(is);
  reader.expect("msoc-program");
  if (reader.integer() != 1) throw ParseError("unsupported program version");

  ConicProgram program;
  reader.expect("vars");
  program.num_vars = static_cast<int>(reader.integer());
  for (int v = 0; v < program.num_vars; ++v) {
    reader.expect("var");
    const int time = static_cast<int>(reader.integer());
    const int pi = static_cast<int>(reader.integer());
    const int pj = static_cast<int>(reader.integer());
    program.variables.emplace_back(time, MomentKey{pi, pj});
    program.var_scales.push_back(reader.real());
  }
  reader.expect("objective");
  program.objective = reader.row_body(program.num_vars);

  reader.expect("eq");
  const long eq = reader.integer();
  for (long k = 0; k < eq; ++k) {
    program.equalities.push_back(reader.row(program.num_vars));
  }
  reader.expect("ineq");
  const long ineq = reader.integer();
  for (long k = 0; k < ineq; ++k) {
    program.inequalities.push_back(reader.row(program.num_vars));
  }
  reader.expect("psd");
  const long blocks = reader.integer();
  for (long k = 0; k < blocks; ++k) {
    reader.expect("block");
    PsdBlock block;
    block.time_index = static_cast<int>(reader.integer());
    block.side = static_cast<int>(reader.integer());
    const int entries = block.side * (block.side + 1) / 2;
    for (int e = 0; e < entries; ++e) {
      block.entries.push_back(reader.row(program.num_vars));
    }
    program.psd_blocks.push_back(std::move(block));
  }
  return program;
}

void write_program_file(const std::string& path, const ConicProgram& program) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_program(os, program);
}

ConicProgram read_program_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_program(is);
}

}  // namespace msoc
