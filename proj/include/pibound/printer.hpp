#ifndef PIBOUND_PRINTER_HPP
#define PIBOUND_PRINTER_HPP

#include <string>

#include "pibound/process.hpp"

namespace pibound {

/// Pretty-prints a process in the concrete syntax accepted by parse_process.
/// parse_process(print_process(p)) is alpha-equivalent to p.
std::string print_process(const ProcRef& p);

} // namespace pibound

#endif
