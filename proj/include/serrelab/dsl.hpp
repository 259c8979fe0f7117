#pragma once

#include "serrelab/towers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace serrelab {

/// Parse failure at a 1-based position; what() is reproducible from the
/// fields.
struct ParseError : Error {
  int line = 1;
  int column = 1;
  std::string expected;
  std::string found;

  ParseError(int line, int column, std::string expected, std::string found);
};

struct TaskDecl {
  std::string name;   // <kind>_<tower>, numbered on repeats
  std::string kind;   // "separate" or "discriminate"
  std::string tower;  // declared tower name
  std::vector<std::string> set;  // declared word names
  int max = 16;
  std::uint64_t seed = 0;

  friend bool operator==(const TaskDecl& a, const TaskDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.tower == b.tower && a.set == b.set &&
           a.max == b.max && a.seed == b.seed;
  }
};

/// One top-level declaration; payload selected by kind. Words may live over
/// an alphabet or over the presentation of a graph or tower (`scope` names
/// the owner).
struct Declaration {
  enum class Kind { Alphabet, Word, Hom, Graph, Tower, Task };
  Kind kind = Kind::Alphabet;
  std::string name;

  AlphabetRef alphabet;  // Alphabet
  std::string scope;     // Word
  Word word;             // Word
  std::optional<FreeHom> hom;  // Hom
  std::string hom_domain, hom_codomain;
  std::optional<GraphOfGroups> graph;    // Graph
  std::optional<Presentation> pres;      // Graph (derived, not rendered)
  std::optional<Tower> tower;            // Tower
  std::string base_name;                 // Tower
  std::optional<TaskDecl> task;          // Task
};

bool operator==(const Declaration& a, const Declaration& b);

struct Document {
  std::vector<Declaration> decls;

  const Declaration* find(Declaration::Kind kind, const std::string& name) const;

  friend bool operator==(const Document& a, const Document& b) { return a.decls == b.decls; }
};

Document parse(const std::string& text);
std::string render(const Document& doc);

}  // namespace serrelab
