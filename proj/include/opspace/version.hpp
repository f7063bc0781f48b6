#pragma once

#define OPSPACE_VERSION "0.1.0"
