# Empty init file for package
