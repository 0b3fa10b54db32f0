#pragma once

// Line-oriented netlist format for NodalNetwork:
//
//   ports <node> <node>
//   z0 <ohm>                      reference impedance (default 50)
//   vphase <m/s>                  default line phase velocity
//   island <node>
//   cpw <len_m> <z0> <v> <a> <b>  z0 or v of 0 take the defaults
//   lser <l_h> <a> <b>
//   cap <c_f> <a> <b>
//   ind <l_h> <a> <b>
//   squid <l_h>                   island to ground
//
// '#' starts a comment; "gnd" or "0" is ground.

#include <iosfwd>
#include <string>

#include "giant/mwnet.hpp"

namespace ga::mwnet {

/// Throws ParseError "<source>:<line>: ..." on malformed lines and
/// DomainError when the assembled network is invalid.
NodalNetwork parse_netlist(std::istream& in, const std::string& source);
NodalNetwork load_netlist(const std::string& path);

/// Text that parse_netlist reads back to the same network (island
/// inductors are re-appended after the other elements).
std::string format_netlist(const NodalNetwork& net);

}  // namespace ga::mwnet
