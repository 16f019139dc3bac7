#pragma once

#include "fisa/builtin_catalog.hpp"
#include "fisa/catalog.hpp"
#include "fisa/diagnostic.hpp"
#include "fisa/dsl.hpp"
#include "fisa/engine.hpp"
#include "fisa/model.hpp"
#include "fisa/report.hpp"
#include "fisa/trace.hpp"
