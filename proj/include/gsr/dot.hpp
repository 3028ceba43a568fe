#pragma once

// DOT export of automaton/game products, edge colors green/red/black.

#include <sstream>
#include <string>

#include "gsr/automata.hpp"

namespace gsr {

inline std::string render_colored_product_dot(const ColoredProduct& prod,
                                              const ParamAutomaton& p,
                                              const GameGraph& g) {
  std::ostringstream out;
  out << "digraph product {\n";
  auto node = [&](int s) {
    return '"' + p.state_names[prod.states[s].mem] + "," +
           g.names[prod.states[s].v] + '"';
  };
  for (std::size_t s = 0; s < prod.states.size(); ++s) {
    out << "  " << node(static_cast<int>(s));
    if (static_cast<int>(s) == prod.initial)
      out << " [shape=doublecircle]";
    else if (g.owner[prod.states[s].v] == Player::Antagonist)
      out << " [shape=box]";
    out << ";\n";
  }
  for (const auto& e : prod.edges) {
    const char* color = e.color == EdgeColor::Green  ? "green"
                        : e.color == EdgeColor::Red ? "red"
                                                    : "black";
    out << "  " << node(e.from) << " -> " << node(e.to) << " [color=" << color
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gsr
