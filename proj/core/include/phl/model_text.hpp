#pragma once

// Text format for finite structures and homomorphisms.
//
//   model NAME of THEORY
//   carrier s: a b c;
//   fun f: (a,b) -> c;
//   rel R: (a,b) (b,c);
//
//   hom H : M -> N
//   map s: a->x b->y;

#include <string>
#include <string_view>
#include <vector>

#include "phl/lexer.hpp"
#include "phl/structure.hpp"

namespace phl {

struct NamedHom {
  std::string name;
  std::string source;
  std::string target;
  Homomorphism hom;
};

struct ModelDocument {
  std::vector<Structure> models;
  std::vector<NamedHom> homs;

  const Structure* find_model(std::string_view name) const;
};

/// Homs may refer to models of the same document or to `known`.
ModelDocument parse_model_document(const Theory& theory, std::string_view text,
                                   const std::vector<Structure>& known = {});
/// Exactly one model.
Structure parse_model(const Theory& theory, std::string_view text);

/// Parses a model block starting at the `model` keyword.
Structure parse_model(TokenStream& ts, const Theory& theory, std::shared_ptr<const Signature> sig);

std::string print_model(const Structure& m, const std::string& theory_name = {});
std::string print_hom(const std::string& name, const Structure& m, const Structure& n, const Homomorphism& h);

/// Shared signature handle for structures of a theory.
std::shared_ptr<const Signature> share_signature(const Theory& theory);

/// Element tuple rendered as "(a,b)".
std::string print_tuple(const Structure& m, const std::vector<std::size_t>& sorts, const Tuple& t);

}  // namespace phl
