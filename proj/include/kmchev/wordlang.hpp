#pragma once
#include "kmchev/cartan.hpp"
#include "kmchev/chevgroup.hpp"
#include <string>

namespace kmchev {

// Grammar (indices 1-based):
//   word   := letter { "*" letter } ;
//   letter := "x(" signedsimple "," rat ")" | "xr(" coords "," rat ")"
//           | "h(" idx "," rat ")" | "w(" idx [ "," rat ] ")" ;
//   signedsimple := ["+"|"-"] idx ;
//   coords := "[" int {"," int} "]" ;
//   rat    := int [ "/" posint ] ;
// w(i) means wtilde_{alpha_i}(1). Whitespace between tokens is ignored; the
// empty string parses to the identity word.
Word parse_word(const Gcm& A, const std::string& text);

std::string print_letter(const Letter& l);
std::string print_word(const Word& w);

} // namespace kmchev
