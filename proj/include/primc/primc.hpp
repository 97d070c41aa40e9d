#pragma once

#include "errors.hpp"
#include "series.hpp"
#include "crystal.hpp"
#include "energy.hpp"
#include "partitions.hpp"
#include "capparelli.hpp"
#include "characters.hpp"
