#pragma once

#include <iosfwd>

#include "idt/mixture.hpp"

namespace idt {

// Line-oriented checkpoint of a regressor's tree:
//
//   idt-tree 1
//   config <p> <A> <a> <delta> <unlimited|ceil_log2> <clip 0|1> <growth 0|1>
//   state <name> <steps> <pending node id or -1>
//   nodes <count>
//   <label> <parent> <alpha> <lnL> <lnP> <lower...> <upper...> <r_reg...>
//       <r_inv...> <w...> <xd...> <dd> <updates> <buffered> [<t> <x...> <d|?>]...
//
// one node per line in arena order, the root label written as "-", reals at
// 17 significant digits so loading reproduces every value exactly.
void save_checkpoint(std::ostream& os, const IdtRegressor& regressor);

// Throws DataError on a malformed checkpoint.
IdtRegressor load_checkpoint(std::istream& is);

}  // namespace idt
