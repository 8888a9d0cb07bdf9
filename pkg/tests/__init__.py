"""Test suite for file-converter-seo-app."""
