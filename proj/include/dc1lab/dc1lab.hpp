#pragma once

#include "dc1lab/construct.hpp"
#include "dc1lab/furstenberg.hpp"
#include "dc1lab/index_set.hpp"
#include "dc1lab/json_io.hpp"
#include "dc1lab/minimality.hpp"
#include "dc1lab/orbitstats.hpp"
#include "dc1lab/quadratic.hpp"
#include "dc1lab/sequence.hpp"
#include "dc1lab/stable.hpp"
#include "dc1lab/system.hpp"
