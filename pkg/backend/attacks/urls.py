from django.urls import path, include
from rest_framework.routers import DefaultRouter

from .views import AttackRunViewSet

router = DefaultRouter()
router.register(r'', AttackRunViewSet, basename='attack')

urlpatterns = [
    path('', include(router.urls)),
]
