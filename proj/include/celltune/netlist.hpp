/*!
  \file netlist.hpp
  \brief Gate-level netlist produced by the mapper
*/

#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cell_library.hpp"
#include "errors.hpp"

namespace celltune {

/*! \brief One instantiated cell; inputs[i] is the net feeding pin i. */
struct mapped_gate {
  std::uint32_t cell = 0;
  std::vector<std::uint32_t> inputs;
  std::uint32_t output = 0;
};

/*! \brief Structural netlist over numbered nets.
 *
 * Net 0 is constant false, net 1 constant true, nets 2 .. num_pis() + 1 the
 * primary inputs, then one net per gate in emission order. Gate inputs
 * always reference lower-numbered nets, so gate order is topological.
 */
class mapped_netlist {
public:
  static constexpr std::uint32_t const0_net = 0;
  static constexpr std::uint32_t const1_net = 1;

  explicit mapped_netlist(std::vector<std::string> pi_names)
      : pi_names_(std::move(pi_names)) {}

  std::uint32_t num_pis() const { return static_cast<std::uint32_t>(pi_names_.size()); }
  std::uint32_t num_pos() const { return static_cast<std::uint32_t>(po_nets_.size()); }
  std::uint32_t num_gates() const { return static_cast<std::uint32_t>(gates_.size()); }
  std::uint32_t num_nets() const { return 2 + num_pis() + num_gates(); }

  std::uint32_t pi_net(std::uint32_t index) const { return 2 + index; }
  std::uint32_t gate_output_net(std::uint32_t gate_index) const {
    return 2 + num_pis() + gate_index;
  }
  bool is_gate_net(std::uint32_t net) const { return net >= 2 + num_pis() && net < num_nets(); }
  //! gate driving a gate net
  std::uint32_t driver_of(std::uint32_t net) const { return net - 2 - num_pis(); }

  //! appends a gate and returns the net it drives
  std::uint32_t add_gate(std::uint32_t cell_index, std::vector<std::uint32_t> inputs) {
    const std::uint32_t out = num_nets();
    for (std::uint32_t in : inputs) {
      if (in >= out) {
        throw cycle_detected("gate input net " + std::to_string(in) +
                             " does not precede its output net " + std::to_string(out));
      }
    }
    gates_.push_back({cell_index, std::move(inputs), out});
    return out;
  }

  void add_po(std::uint32_t net, std::string name = {}) {
    if (net >= num_nets()) {
      throw dangling_net("output net " + std::to_string(net) + " is not driven");
    }
    po_nets_.push_back(net);
    po_names_.push_back(std::move(name));
  }

  //! swaps the cell of a gate; pin count and nets are the caller's contract
  void set_cell(std::uint32_t gate_index, std::uint32_t cell_index) {
    gates_[gate_index].cell = cell_index;
  }

  const std::vector<mapped_gate>& gates() const { return gates_; }
  const std::vector<std::uint32_t>& po_nets() const { return po_nets_; }
  const std::vector<std::string>& pi_names() const { return pi_names_; }
  const std::vector<std::string>& po_names() const { return po_names_; }

  double total_area(const cell_library& lib) const {
    double area = 0.0;
    for (const auto& g : gates_) {
      area += lib.at(g.cell).area;
    }
    return area;
  }

  //! every cell exists, arities line up and net numbering is consistent
  bool verify(const cell_library& lib) const {
    for (std::uint32_t i = 0; i < num_gates(); ++i) {
      const auto& g = gates_[i];
      if (g.cell >= lib.size()) return false;
      if (g.output != gate_output_net(i)) return false;
      if (g.inputs.size() != lib.at(g.cell).num_inputs) return false;
      for (std::uint32_t in : g.inputs) {
        if (in >= g.output) return false;
      }
    }
    for (std::uint32_t net : po_nets_) {
      if (net >= num_nets()) return false;
    }
    return true;
  }

  std::vector<bool> simulate(const cell_library& lib, const std::vector<bool>& inputs) const {
    if (inputs.size() != num_pis()) {
      throw length_mismatch("simulate: expected " + std::to_string(num_pis()) +
                            " input values, got " + std::to_string(inputs.size()));
    }
    std::vector<bool> value(num_nets(), false);
    value[const1_net] = true;
    for (std::uint32_t i = 0; i < num_pis(); ++i) {
      value[pi_net(i)] = inputs[i];
    }
    for (const auto& g : gates_) {
      const cell& c = lib.at(g.cell);
      unsigned pattern = 0;
      for (std::uint8_t i = 0; i < c.num_inputs; ++i) {
        pattern |= (value[g.inputs[i]] ? 1u : 0u) << i;
      }
      value[g.output] = tt_bit(c.function, pattern);
    }
    std::vector<bool> out(num_pos());
    for (std::uint32_t i = 0; i < num_pos(); ++i) {
      out[i] = value[po_nets_[i]];
    }
    return out;
  }

  /*! \brief Renders one line per input, gate and output.
   *
   * `input <net> <name>`, `gate <cell> <out> <in...>`, `output <net>
   * <name>`; names are omitted when empty. Identical netlists serialize to
   * identical text.
   */
  std::string serialize(const cell_library& lib) const {
    std::ostringstream os;
    for (std::uint32_t i = 0; i < num_pis(); ++i) {
      os << "input " << pi_net(i);
      if (!pi_names_[i].empty()) os << ' ' << pi_names_[i];
      os << '\n';
    }
    for (const auto& g : gates_) {
      os << "gate " << lib.at(g.cell).name << ' ' << g.output;
      for (std::uint32_t in : g.inputs) {
        os << ' ' << in;
      }
      os << '\n';
    }
    for (std::uint32_t i = 0; i < num_pos(); ++i) {
      os << "output " << po_nets_[i];
      if (!po_names_[i].empty()) os << ' ' << po_names_[i];
      os << '\n';
    }
    return os.str();
  }

private:
  std::vector<std::string> pi_names_;
  std::vector<mapped_gate> gates_;
  std::vector<std::uint32_t> po_nets_;
  std::vector<std::string> po_names_;
};

} // namespace celltune
