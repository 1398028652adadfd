"""
URL configuration for the locklab project.

The `urlpatterns` list routes URLs to views. For more information please see:
    https://docs.djangoproject.com/en/4.2/topics/http/urls/
"""

from django.contrib import admin
from django.urls import path, include
from rest_framework import permissions
from drf_yasg.views import get_schema_view
from drf_yasg import openapi

# Schema view for Swagger documentation
schema_view = get_schema_view(
    openapi.Info(
        title="LockLab API",
        default_version='v1',
        description="Logic locking, SAT attack and key-size sweep experiments",
        license=openapi.License(name="MIT License"),
    ),
    public=True,
    permission_classes=[permissions.AllowAny],
)

urlpatterns = [
    # Admin site
    path("admin/", admin.site.urls),

    # API endpoints
    path("api/v1/netlists/", include("netlist.urls")),
    path("api/v1/attacks/", include("attacks.urls")),
    path("api/v1/sweeps/", include("harness.urls")),

    # Swagger documentation
    path('swagger/', schema_view.with_ui('swagger', cache_timeout=0), name='schema-swagger-ui'),
    path('redoc/', schema_view.with_ui('redoc', cache_timeout=0), name='schema-redoc'),
]
