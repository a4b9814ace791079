#pragma once

#include "hott/axioms.hpp"
#include "hott/datatypes.hpp"
#include "hott/kernel.hpp"
#include "hott/module.hpp"
#include "hott/stdlib.hpp"
#include "hott/syntax.hpp"
#include "hott/term.hpp"
