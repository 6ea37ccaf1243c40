// Everything.

#ifndef PARCOL_PARCOL_HPP_
#define PARCOL_PARCOL_HPP_

#include "parcol/arrow.hpp"
#include "parcol/config_space.hpp"
#include "parcol/group.hpp"
#include "parcol/hausdorff.hpp"
#include "parcol/json_io.hpp"
#include "parcol/measure_audit.hpp"
#include "parcol/proper_colouring.hpp"
#include "parcol/random.hpp"
#include "parcol/rational.hpp"
#include "parcol/rule.hpp"
#include "parcol/types_semigroup.hpp"

#endif  // PARCOL_PARCOL_HPP_
